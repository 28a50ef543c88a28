#pragma once

/**
 * @file contfrac.hpp
 * @brief Exact continued fractions of rationals and real quadratic irrationals.
 *
 * Rationals expand to a FiniteCF in the canonical form whose last term is at
 * least 2. Quadratic irrationals expand to an EventuallyPeriodicCF with the
 * shortest preperiod and a primitive period, found by running the integer
 * (P, Q) recursion for (P + sqrt(D)) / Q until a state repeats. The state
 * determines the complete quotient exactly, so the first repeat marks both the
 * true start of the period and its true length.
 */

#include <algorithm>
#include <cstddef>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "twistlab/error.hpp"
#include "twistlab/integer.hpp"
#include "twistlab/surd.hpp"

namespace twistlab {

using Terms = std::vector<Integer>;

/// 2x2 integer matrix [[a, b], [c, d]] acting by x -> (a x + b) / (c x + d).
struct Matrix2 {
    Integer a = 1;
    Integer b = 0;
    Integer c = 0;
    Integer d = 1;

    static Matrix2 identity() { return {}; }
    /// [[t, 1], [1, 0]], the Moebius map x -> t + 1/x.
    static Matrix2 partial_quotient(const Integer& t) { return {t, 1, 1, 0}; }

    Integer det() const { return a * d - b * c; }

    friend Matrix2 operator*(const Matrix2& x, const Matrix2& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    friend bool operator==(const Matrix2&, const Matrix2&) = default;

    /// Inverse of a determinant +-1 matrix.
    Matrix2 unimodular_inverse() const {
        const Integer e = det();
        if (e != 1 && e != -1) throw Error(ErrorKind::invalid_argument, "matrix is not unimodular");
        return {d * e, -b * e, -c * e, a * e};
    }

    QuadraticSurd apply(const QuadraticSurd& x) const {
        const QuadraticSurd den = QuadraticSurd(c) * x + QuadraticSurd(d);
        if (den.is_zero()) throw Error(ErrorKind::division_by_zero, "Moebius map has a pole at this point");
        return (QuadraticSurd(a) * x + QuadraticSurd(b)) / den;
    }
};

/// Product of partial-quotient matrices, in order.
inline Matrix2 prefix_matrix(std::span<const Integer> terms) {
    Matrix2 m;
    for (const auto& t : terms) m = m * Matrix2::partial_quotient(t);
    return m;
}

// ---------------------------------------------------------------------------

class FiniteCF {
public:
    /// Validates canonical form: nonempty, a_i >= 1 for i >= 1, last term >= 2 when length > 1.
    explicit FiniteCF(Terms terms) : terms_(std::move(terms)) {
        if (terms_.empty()) throw Error(ErrorKind::invalid_argument, "empty continued fraction");
        for (std::size_t i = 1; i < terms_.size(); ++i) {
            if (terms_[i] < 1)
                throw Error(ErrorKind::invalid_argument, "partial quotients after a0 must be positive");
        }
        if (terms_.size() > 1 && terms_.back() < 2)
            throw Error(ErrorKind::invalid_argument, "canonical finite form cannot end in 1");
    }

    /// Folds a trailing 1 into its predecessor, then validates.
    static FiniteCF canonical(Terms terms) {
        if (terms.size() > 1 && terms.back() == 1) {
            terms.pop_back();
            terms.back() += 1;
        }
        return FiniteCF(std::move(terms));
    }

    const Terms& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }

    friend bool operator==(const FiniteCF&, const FiniteCF&) = default;

private:
    Terms terms_;
};

class EventuallyPeriodicCF {
public:
    /// Accepts exactly the canonical form (minimal preperiod, primitive period).
    EventuallyPeriodicCF(Terms preperiod, Terms period);

    /// Reduces an arbitrary (preperiod, period) description to canonical form.
    static EventuallyPeriodicCF canonical(Terms preperiod, Terms period);

    const Terms& preperiod() const noexcept { return preperiod_; }
    const Terms& period() const noexcept { return period_; }

    /// Partial quotient at position k.
    const Integer& term(std::size_t k) const {
        if (k < preperiod_.size()) return preperiod_[k];
        return period_[(k - preperiod_.size()) % period_.size()];
    }

    friend bool operator==(const EventuallyPeriodicCF&, const EventuallyPeriodicCF&) = default;

private:
    struct Trusted {};
    EventuallyPeriodicCF(Terms preperiod, Terms period, Trusted)
        : preperiod_(std::move(preperiod)), period_(std::move(period)) {}

    Terms preperiod_;
    Terms period_;
};

using ContinuedFraction = std::variant<FiniteCF, EventuallyPeriodicCF>;

// ---------------------------------------------------------------------------
// Words.

/// Length of the shortest word whose repetition gives `word` (KMP failure function).
inline std::size_t primitive_root_length(std::span<const Integer> word) {
    const std::size_t n = word.size();
    if (n == 0) return 0;
    std::vector<std::size_t> fail(n, 0);
    for (std::size_t i = 1, k = 0; i < n; ++i) {
        while (k > 0 && word[i] != word[k]) k = fail[k - 1];
        if (word[i] == word[k]) ++k;
        fail[i] = k;
    }
    const std::size_t p = n - fail[n - 1];
    return n % p == 0 ? p : n;
}

inline bool is_primitive_word(std::span<const Integer> word) {
    return !word.empty() && primitive_root_length(word) == word.size();
}

/// Lexicographically least rotation of a primitive positive word.
inline Terms canonical_rotation(std::span<const Integer> period) {
    if (period.empty()) throw Error(ErrorKind::invalid_argument, "empty period");
    for (const auto& t : period) {
        if (t < 1) throw Error(ErrorKind::invalid_argument, "period terms must be positive");
    }
    if (!is_primitive_word(period)) throw Error(ErrorKind::not_primitive, "period is not primitive");
    const std::size_t n = period.size();
    std::size_t best = 0;
    for (std::size_t s = 1; s < n; ++s) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto& x = period[(s + i) % n];
            const auto& y = period[(best + i) % n];
            if (x != y) {
                if (x < y) best = s;
                break;
            }
        }
    }
    Terms out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(period[(best + i) % n]);
    return out;
}

// ---------------------------------------------------------------------------

inline EventuallyPeriodicCF EventuallyPeriodicCF::canonical(Terms preperiod, Terms period) {
    if (period.empty()) throw Error(ErrorKind::invalid_argument, "empty period");
    for (const auto& t : period) {
        if (t < 1) throw Error(ErrorKind::invalid_argument, "period terms must be positive");
    }
    for (std::size_t i = 1; i < preperiod.size(); ++i) {
        if (preperiod[i] < 1)
            throw Error(ErrorKind::invalid_argument, "partial quotients after a0 must be positive");
    }
    period.resize(primitive_root_length(period));
    // Absorb the last preperiod term while it equals the last period term.
    while (!preperiod.empty() && preperiod.back() == period.back()) {
        std::rotate(period.begin(), period.end() - 1, period.end());
        preperiod.pop_back();
    }
    return EventuallyPeriodicCF(std::move(preperiod), std::move(period), Trusted{});
}

inline EventuallyPeriodicCF::EventuallyPeriodicCF(Terms preperiod, Terms period)
    : preperiod_(preperiod), period_(period) {
    auto canon = canonical(std::move(preperiod), std::move(period));
    if (canon.preperiod_ != preperiod_ || canon.period_ != period_)
        throw Error(ErrorKind::invalid_argument, "continued fraction is not in canonical form");
}

// ---------------------------------------------------------------------------
// Expansion.

inline FiniteCF expand_rational(const Rational& x) {
    Integer num = numerator(x);
    Integer den = denominator(x);
    Terms terms;
    while (true) {
        Integer a = floor_div(num, den);
        terms.push_back(a);
        Integer rem = num - a * den;
        if (rem == 0) break;
        num = std::move(den);
        den = std::move(rem);
    }
    return FiniteCF::canonical(std::move(terms));
}

/// Integer state for the complete quotient (P + sqrt(D)) / Q, with Q | D - P^2.
struct SurdState {
    Integer P;
    Integer Q;
    friend bool operator==(const SurdState&, const SurdState&) = default;
    friend bool operator<(const SurdState& x, const SurdState& y) {
        return x.P != y.P ? x.P < y.P : x.Q < y.Q;
    }
};

/// Runs the (P, Q) recursion from an irrational surd. Exposes the raw state
/// stream so callers and tests can inspect it.
class SurdExpander {
public:
    explicit SurdExpander(const QuadraticSurd& x) {
        if (x.is_rational())
            throw Error(ErrorKind::rational_input, "rational input; use expand_rational");
        // (p + q sqrt d)/r = (s p + sqrt(q^2 d)) / (s r) with s = sign(q).
        D_ = x.q() * x.q() * x.d();
        state_.P = x.q() > 0 ? x.p() : Integer(-x.p());
        state_.Q = x.q() > 0 ? x.r() : Integer(-x.r());
        if ((D_ - state_.P * state_.P) % state_.Q != 0) {
            const Integer m = abs(state_.Q);
            state_.P *= m;
            state_.Q *= m;
            D_ *= m * m;
        }
        root_ = isqrt(D_);
    }

    const SurdState& state() const noexcept { return state_; }
    const Integer& radicand() const noexcept { return D_; }

    /// Current partial quotient floor((P + sqrt D) / Q).
    Integer term() const {
        // sqrt(D) is irrational: floor(P + sqrt D) = P + root, floor(-P - sqrt D) = -P - root - 1.
        if (state_.Q > 0) return floor_div(state_.P + root_, state_.Q);
        return floor_div(-state_.P - root_ - 1, -state_.Q);
    }

    /// Emits the current partial quotient and advances to the next state.
    Integer next() {
        Integer a = term();
        Integer P = a * state_.Q - state_.P;
        Integer Q = (D_ - P * P) / state_.Q;
        state_.P = std::move(P);
        state_.Q = std::move(Q);
        return a;
    }

private:
    Integer D_;
    Integer root_;
    SurdState state_;
};

inline EventuallyPeriodicCF expand_surd(const QuadraticSurd& x) {
    SurdExpander it(x);
    std::map<SurdState, std::size_t> seen;
    Terms terms;
    while (true) {
        auto [pos, inserted] = seen.emplace(it.state(), terms.size());
        if (!inserted) {
            const std::size_t start = pos->second;
            Terms preperiod(terms.begin(), terms.begin() + static_cast<std::ptrdiff_t>(start));
            Terms period(terms.begin() + static_cast<std::ptrdiff_t>(start), terms.end());
            // Already minimal; canonical() is a no-op safety net on the result shape.
            return EventuallyPeriodicCF::canonical(std::move(preperiod), std::move(period));
        }
        terms.push_back(it.next());
    }
}

/// Rational inputs give a FiniteCF, irrational ones an EventuallyPeriodicCF.
inline ContinuedFraction expand(const QuadraticSurd& x) {
    if (x.is_rational()) return expand_rational(x.to_rational());
    return expand_surd(x);
}

// ---------------------------------------------------------------------------
// Evaluation.

inline QuadraticSurd value_of(const FiniteCF& cf) {
    const auto& t = cf.terms();
    Rational v(t.back());
    for (std::size_t i = t.size() - 1; i-- > 0;) v = Rational(t[i]) + 1 / v;
    return QuadraticSurd(v);
}

/// Value of the purely periodic expansion [(b1, ..., bn)]: the fixed point
/// y > 1 of y -> (m11 y + m12) / (m21 y + m22) for M = prod [[b_i, 1], [1, 0]].
inline QuadraticSurd purely_periodic_value(std::span<const Integer> period) {
    if (period.empty()) throw Error(ErrorKind::invalid_argument, "empty period");
    const Matrix2 m = prefix_matrix(period);
    // m21 y^2 + (m22 - m11) y - m12 = 0, positive root. Dividing out the
    // content keeps the discriminant small enough to factor.
    const Integer g = gcd(gcd(m.c, Integer(m.d - m.a)), m.b);
    const Integer c2 = m.c / g, c1 = (m.d - m.a) / g, c0 = m.b / g;
    return QuadraticSurd::normalize(-c1, 1, 2 * c2, c1 * c1 + 4 * c2 * c0);
}

inline QuadraticSurd value_of(const EventuallyPeriodicCF& cf) {
    const QuadraticSurd tail = purely_periodic_value(cf.period());
    return prefix_matrix(cf.preperiod()).apply(tail);
}

inline QuadraticSurd value_of(const ContinuedFraction& cf) {
    return std::visit([](const auto& c) { return value_of(c); }, cf);
}

// ---------------------------------------------------------------------------
// Convergents.

struct Convergent {
    Integer p;
    Integer q;
    std::size_t index = 0;

    QuadraticSurd value() const { return QuadraticSurd(Rational(p, q)); }
    friend bool operator==(const Convergent&, const Convergent&) = default;
};

namespace detail {

template <class TermAt>
std::vector<Convergent> convergents_from(TermAt&& term_at, std::size_t count) {
    std::vector<Convergent> out;
    out.reserve(count);
    Integer p_prev = 1, q_prev = 0; // index -1
    Integer p_prev2 = 0, q_prev2 = 1; // index -2
    for (std::size_t k = 0; k < count; ++k) {
        const Integer& a = term_at(k);
        Integer p = a * p_prev + p_prev2;
        Integer q = a * q_prev + q_prev2;
        out.push_back({p, q, k});
        p_prev2 = std::move(p_prev);
        q_prev2 = std::move(q_prev);
        p_prev = std::move(p);
        q_prev = std::move(q);
    }
    return out;
}

} // namespace detail

inline std::vector<Convergent> convergents(const FiniteCF& cf, std::size_t count) {
    if (count == 0) throw Error(ErrorKind::invalid_argument, "count must be positive");
    if (count > cf.size())
        throw Error(ErrorKind::invalid_argument, "count exceeds the length of a finite expansion");
    return detail::convergents_from([&](std::size_t k) -> const Integer& { return cf.terms()[k]; }, count);
}

inline std::vector<Convergent> convergents(const EventuallyPeriodicCF& cf, std::size_t count) {
    if (count == 0) throw Error(ErrorKind::invalid_argument, "count must be positive");
    return detail::convergents_from([&](std::size_t k) -> const Integer& { return cf.term(k); }, count);
}

inline std::vector<Convergent> convergents(const ContinuedFraction& cf, std::size_t count) {
    return std::visit([&](const auto& c) { return convergents(c, count); }, cf);
}

// ---------------------------------------------------------------------------
// Text form: "[a0; a1, a2]" (finite), "[a0, a1; (b1, b2)]" (periodic),
// "[(b1, b2)]" (purely periodic).

namespace detail {

inline std::string join_terms(std::span<const Integer> terms) {
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i) out += ", ";
        out += terms[i].str();
    }
    return out;
}

} // namespace detail

inline std::string to_string(const FiniteCF& cf) {
    const auto& t = cf.terms();
    std::string out = "[" + t.front().str();
    if (t.size() > 1) out += "; " + detail::join_terms(std::span(t).subspan(1));
    return out + "]";
}

inline std::string to_string(const EventuallyPeriodicCF& cf) {
    std::string out = "[";
    if (!cf.preperiod().empty()) out += detail::join_terms(cf.preperiod()) + "; ";
    return out + "(" + detail::join_terms(cf.period()) + ")]";
}

inline std::string to_string(const ContinuedFraction& cf) {
    return std::visit([](const auto& c) { return to_string(c); }, cf);
}

inline std::ostream& operator<<(std::ostream& os, const FiniteCF& cf) { return os << to_string(cf); }
inline std::ostream& operator<<(std::ostream& os, const EventuallyPeriodicCF& cf) { return os << to_string(cf); }

/// Parses the text form produced by to_string. Whitespace is ignored.
inline ContinuedFraction parse_cf(std::string_view text) {
    std::string s;
    for (char c : text) {
        if (c != ' ' && c != '\t') s += c;
    }
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw Error(ErrorKind::parse, "continued fraction must be enclosed in [ ]");
    s = s.substr(1, s.size() - 2);

    auto split_ints = [](const std::string& list) {
        Terms out;
        if (list.empty()) return out;
        std::size_t start = 0;
        while (true) {
            auto comma = list.find(',', start);
            out.push_back(parse_integer(list.substr(start, comma - start)));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        return out;
    };

    const auto open = s.find('(');
    if (open == std::string::npos) {
        auto semi = s.find(';');
        Terms terms;
        if (semi == std::string::npos) {
            terms = split_ints(s);
            if (terms.size() != 1) throw Error(ErrorKind::parse, "finite form is [a0; a1, ...]");
        } else {
            terms = split_ints(s.substr(0, semi));
            if (terms.size() != 1) throw Error(ErrorKind::parse, "finite form is [a0; a1, ...]");
            auto rest = split_ints(s.substr(semi + 1));
            terms.insert(terms.end(), rest.begin(), rest.end());
        }
        return FiniteCF(std::move(terms));
    }
    if (s.back() != ')') throw Error(ErrorKind::parse, "period must close the expansion");
    Terms period = split_ints(s.substr(open + 1, s.size() - open - 2));
    Terms preperiod;
    if (open > 0) {
        if (s[open - 1] != ';') throw Error(ErrorKind::parse, "expected ';' before the period");
        preperiod = split_ints(s.substr(0, open - 1));
    }
    return EventuallyPeriodicCF(std::move(preperiod), std::move(period));
}

} // namespace twistlab

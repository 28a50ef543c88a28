#pragma once

/**
 * @file surd.hpp
 * @brief Exact arithmetic in real quadratic fields.
 *
 * A QuadraticSurd is the real number (p + q*sqrt(d)) / r held in a canonical
 * form: r > 0, gcd(p, q, r) = 1, d squarefree, and d = 1 exactly when q = 0.
 * Rationals are the q = 0 slice of the same type, so every other module can
 * treat "finite continued fraction" and "quadratic irrational" uniformly.
 *
 * Every decision (floor, sign, ordering) is made with integer comparisons
 * only. The only floating-point-flavoured output is approx_decimal, which is
 * a truncated decimal string for display.
 */

#include <compare>
#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>

#include "twistlab/error.hpp"
#include "twistlab/integer.hpp"

namespace twistlab {

class QuadraticSurd {
public:
    /// Zero.
    QuadraticSurd() : p_(0), q_(0), r_(1), d_(1) {}

    QuadraticSurd(const Integer& n) : p_(n), q_(0), r_(1), d_(1) {} // NOLINT: implicit by intent
    QuadraticSurd(int n) : QuadraticSurd(Integer(n)) {}             // NOLINT

    explicit QuadraticSurd(const Rational& x)
        : p_(twistlab::numerator(x)), q_(0), r_(twistlab::denominator(x)), d_(1) {}

    /// Canonicalizes (p + q*sqrt(d)) / r. Rejects d <= 0 and r == 0.
    static QuadraticSurd normalize(Integer p, Integer q, Integer r, Integer d);

    /// sqrt(n) for n >= 0.
    static QuadraticSurd sqrt(const Integer& n) {
        if (n == 0) return {};
        return normalize(0, 1, 1, n);
    }

    const Integer& p() const noexcept { return p_; }
    const Integer& q() const noexcept { return q_; }
    const Integer& r() const noexcept { return r_; }
    const Integer& d() const noexcept { return d_; }

    bool is_rational() const noexcept { return q_ == 0; }
    bool is_integer() const noexcept { return q_ == 0 && r_ == 1; }
    bool is_zero() const noexcept { return q_ == 0 && p_ == 0; }

    /// Only meaningful when is_rational().
    Rational to_rational() const {
        if (!is_rational()) throw Error(ErrorKind::invalid_argument, "surd is irrational");
        return Rational(p_, r_);
    }

    /// Exact sign of the real number.
    int signum() const;

    QuadraticSurd conjugate() const {
        QuadraticSurd c = *this;
        c.q_ = -c.q_;
        return c;
    }

    QuadraticSurd inverse() const;

    QuadraticSurd operator-() const {
        QuadraticSurd c = *this;
        c.p_ = -c.p_;
        c.q_ = -c.q_;
        return c;
    }

    friend QuadraticSurd operator+(const QuadraticSurd& x, const QuadraticSurd& y);
    friend QuadraticSurd operator-(const QuadraticSurd& x, const QuadraticSurd& y) { return x + (-y); }
    friend QuadraticSurd operator*(const QuadraticSurd& x, const QuadraticSurd& y);
    friend QuadraticSurd operator/(const QuadraticSurd& x, const QuadraticSurd& y) {
        return x * y.inverse();
    }

    QuadraticSurd& operator+=(const QuadraticSurd& y) { return *this = *this + y; }
    QuadraticSurd& operator-=(const QuadraticSurd& y) { return *this = *this - y; }
    QuadraticSurd& operator*=(const QuadraticSurd& y) { return *this = *this * y; }
    QuadraticSurd& operator/=(const QuadraticSurd& y) { return *this = *this / y; }

    // Canonical form is unique, so tuple equality is real-number equality.
    friend bool operator==(const QuadraticSurd& x, const QuadraticSurd& y) {
        return x.p_ == y.p_ && x.q_ == y.q_ && x.r_ == y.r_ && x.d_ == y.d_;
    }

    /// Exact ordering of the real numbers. Throws for distinct irrational fields.
    friend std::strong_ordering operator<=>(const QuadraticSurd& x, const QuadraticSurd& y) {
        const int s = (x - y).signum();
        if (s < 0) return std::strong_ordering::less;
        if (s > 0) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

private:
    QuadraticSurd(Integer p, Integer q, Integer r, Integer d, int /*trusted*/)
        : p_(std::move(p)), q_(std::move(q)), r_(std::move(r)), d_(std::move(d)) {}

    // normalize() for a radicand already known to be squarefree.
    static QuadraticSurd reduce(Integer p, Integer q, Integer r, Integer d);

    // Field for a binary operation; throws on two distinct irrational fields.
    static const Integer& common_field(const QuadraticSurd& x, const QuadraticSurd& y);

    Integer p_;
    Integer q_;
    Integer r_;
    Integer d_;
};

// ---------------------------------------------------------------------------

inline QuadraticSurd QuadraticSurd::normalize(Integer p, Integer q, Integer r, Integer d) {
    if (d <= 0) throw Error(ErrorKind::invalid_argument, "radicand must be positive (real quadratic fields only)");
    if (r == 0) throw Error(ErrorKind::division_by_zero, "zero denominator");
    if (q != 0 && d != 1) {
        auto [square, free_part] = squarefree_decompose(d);
        q *= square;
        d = std::move(free_part);
    }
    return reduce(std::move(p), std::move(q), std::move(r), std::move(d));
}

inline QuadraticSurd QuadraticSurd::reduce(Integer p, Integer q, Integer r, Integer d) {
    if (r == 0) throw Error(ErrorKind::division_by_zero, "division by zero");
    if (d == 1) {
        p += q;
        q = 0;
    }
    if (q == 0) d = 1;
    if (r < 0) {
        p = -p;
        q = -q;
        r = -r;
    }
    Integer g = gcd(gcd(p, q), r);
    if (g > 1) {
        p /= g;
        q /= g;
        r /= g;
    }
    return QuadraticSurd(std::move(p), std::move(q), std::move(r), std::move(d), 0);
}

inline const Integer& QuadraticSurd::common_field(const QuadraticSurd& x, const QuadraticSurd& y) {
    if (x.q_ == 0) return y.d_;
    if (y.q_ == 0) return x.d_;
    if (x.d_ != y.d_)
        throw Error(ErrorKind::incompatible_fields,
                    "incompatible fields Q(sqrt(" + x.d_.str() + ")) and Q(sqrt(" + y.d_.str() + "))");
    return x.d_;
}

inline int QuadraticSurd::signum() const {
    const int sp = p_.sign();
    const int sq = q_.sign();
    if (sq == 0) return sp;
    if (sp == 0 || sp == sq) return sq;
    // Opposite signs: compare p^2 against q^2 d. Never equal when q != 0 and d is squarefree > 1.
    const Integer lhs = p_ * p_;
    const Integer rhs = q_ * q_ * d_;
    return lhs > rhs ? sp : sq;
}

inline QuadraticSurd operator+(const QuadraticSurd& x, const QuadraticSurd& y) {
    const Integer& d = QuadraticSurd::common_field(x, y);
    return QuadraticSurd::reduce(x.p_ * y.r_ + y.p_ * x.r_, x.q_ * y.r_ + y.q_ * x.r_, x.r_ * y.r_, d);
}

inline QuadraticSurd operator*(const QuadraticSurd& x, const QuadraticSurd& y) {
    const Integer& d = QuadraticSurd::common_field(x, y);
    return QuadraticSurd::reduce(x.p_ * y.p_ + x.q_ * y.q_ * d, x.p_ * y.q_ + x.q_ * y.p_, x.r_ * y.r_, d);
}

inline QuadraticSurd QuadraticSurd::inverse() const {
    if (is_zero()) throw Error(ErrorKind::division_by_zero, "division by zero");
    // r / (p + q sqrt d) = r (p - q sqrt d) / (p^2 - q^2 d)
    const Integer norm = p_ * p_ - q_ * q_ * d_;
    return reduce(r_ * p_, -(r_ * q_), norm, d_);
}

// ---------------------------------------------------------------------------

/// Exact floor. Uses floor(y / r) = floor(floor(y) / r) for integer r > 0,
/// and brackets q*sqrt(d) between consecutive integers via isqrt(q^2 d).
inline Integer floor(const QuadraticSurd& x) {
    if (x.is_rational()) return floor_div(x.p(), x.r());
    const Integer k = isqrt(x.q() * x.q() * x.d());
    // q*sqrt(d) is irrational, so it lies strictly between two integers.
    const Integer floor_radical = x.q() > 0 ? k : Integer(-k - 1);
    return floor_div(x.p() + floor_radical, x.r());
}

inline std::strong_ordering compare(const QuadraticSurd& x, const QuadraticSurd& y) { return x <=> y; }

// ---------------------------------------------------------------------------

/// c1*x + c0 = 0 with c1 > 0 and gcd(c1, c0) = 1.
struct LinearPolynomial {
    Integer c1;
    Integer c0;
    friend bool operator==(const LinearPolynomial&, const LinearPolynomial&) = default;
};

/// c2*x^2 + c1*x + c0 = 0 with c2 > 0 and gcd(c2, c1, c0) = 1.
struct QuadraticPolynomial {
    Integer c2;
    Integer c1;
    Integer c0;

    Integer discriminant() const { return c1 * c1 - 4 * c2 * c0; }
    friend bool operator==(const QuadraticPolynomial&, const QuadraticPolynomial&) = default;
};

using MinimalPolynomial = std::variant<LinearPolynomial, QuadraticPolynomial>;

inline MinimalPolynomial minimal_polynomial(const QuadraticSurd& x) {
    if (x.is_rational()) return LinearPolynomial{x.r(), -x.p()};
    // (X - x)(X - conj x) scaled by r^2.
    Integer c2 = x.r() * x.r();
    Integer c1 = -2 * x.p() * x.r();
    Integer c0 = x.p() * x.p() - x.q() * x.q() * x.d();
    const Integer g = gcd(gcd(c2, c1), c0);
    return QuadraticPolynomial{c2 / g, c1 / g, c0 / g};
}

/// Evaluates an integer polynomial at x exactly.
inline QuadraticSurd evaluate(const MinimalPolynomial& poly, const QuadraticSurd& x) {
    return std::visit(
        [&](const auto& f) -> QuadraticSurd {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, LinearPolynomial>) {
                return QuadraticSurd(f.c1) * x + QuadraticSurd(f.c0);
            } else {
                return (QuadraticSurd(f.c2) * x + QuadraticSurd(f.c1)) * x + QuadraticSurd(f.c0);
            }
        },
        poly);
}

// ---------------------------------------------------------------------------
// Text literals.
//
//   literal  := numer [ '/' integer ]
//   numer    := '(' sum ')' | sum
//   sum      := [sign] term { sign term }
//   term     := integer [ '*' 'sqrt' '(' integer ')' ] | 'sqrt' '(' integer ')'
//
// A bare multi-term sum may not be followed by '/': "1+sqrt(2)/2" is rejected
// rather than guessing a precedence. Whitespace is allowed between tokens.

namespace detail {

class SurdParser {
public:
    explicit SurdParser(std::string_view text) : text_(text) {}

    QuadraticSurd parse() {
        skip_ws();
        bool parenthesized = false;
        std::size_t terms = 0;
        Accumulator acc;
        if (peek() == '(') {
            ++pos_;
            terms = parse_sum(acc);
            skip_ws();
            expect(')');
            parenthesized = true;
        } else {
            terms = parse_sum(acc);
        }
        skip_ws();
        Integer denominator = 1;
        if (peek() == '/') {
            if (!parenthesized && terms > 1)
                fail("parenthesize a multi-term numerator before '/'");
            ++pos_;
            skip_ws();
            const bool negative = accept_sign();
            skip_ws();
            denominator = parse_unsigned();
            if (negative) denominator = -denominator;
            if (denominator == 0) fail("zero denominator");
            skip_ws();
        }
        if (pos_ != text_.size()) fail("unexpected trailing input");
        // acc holds p/den_p + q*sqrt(d); everything is integral here.
        return QuadraticSurd::normalize(acc.p, acc.q, denominator, acc.d);
    }

private:
    struct Accumulator {
        Integer p = 0;
        Integer q = 0;
        Integer d = 1;
        bool has_radical = false;
    };

    std::size_t parse_sum(Accumulator& acc) {
        std::size_t count = 0;
        skip_ws();
        bool negative = accept_sign();
        while (true) {
            skip_ws();
            parse_term(acc, negative);
            ++count;
            skip_ws();
            if (peek() != '+' && peek() != '-') break;
            negative = accept_sign();
        }
        return count;
    }

    void parse_term(Accumulator& acc, bool negative) {
        Integer coefficient = 1;
        bool radical = false;
        if (looking_at("sqrt")) {
            radical = true;
        } else {
            coefficient = parse_unsigned();
            skip_ws();
            if (peek() == '*') {
                ++pos_;
                skip_ws();
                if (!looking_at("sqrt")) fail("expected 'sqrt' after '*'");
                radical = true;
            }
        }
        if (negative) coefficient = -coefficient;
        if (!radical) {
            acc.p += coefficient;
            return;
        }
        const std::size_t radicand_column = pos_ + 1;
        pos_ += 4;
        skip_ws();
        expect('(');
        skip_ws();
        const Integer n = parse_unsigned();
        skip_ws();
        expect(')');
        if (n <= 0) throw ParseError(radicand_column, "radicand must be positive");
        // sqrt(n) = s*sqrt(f) with f squarefree.
        auto [s, f] = squarefree_decompose(n);
        coefficient *= s;
        if (f == 1) {
            acc.p += coefficient;
            return;
        }
        if (acc.has_radical && acc.d != f)
            throw ParseError(radicand_column, "terms from different quadratic fields");
        acc.has_radical = true;
        acc.d = f;
        acc.q += coefficient;
    }

    Integer parse_unsigned() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
        if (start == pos_) fail("expected an integer");
        return Integer(std::string(text_.substr(start, pos_ - start)));
    }

    bool accept_sign() {
        skip_ws();
        if (peek() == '+') { ++pos_; return false; }
        if (peek() == '-') { ++pos_; return true; }
        return false;
    }

    bool looking_at(std::string_view word) const { return text_.substr(pos_, word.size()) == word; }

    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }

    [[noreturn]] void fail(const std::string& message) const { throw ParseError(pos_ + 1, message); }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline QuadraticSurd parse_surd(std::string_view text) { return detail::SurdParser(text).parse(); }

/// Canonical literal: "7", "-7/3", "sqrt(2)", "-2*sqrt(3)/5", "(1+sqrt(5))/2".
inline std::string to_string(const QuadraticSurd& x) {
    if (x.is_rational()) {
        return x.r() == 1 ? x.p().str() : x.p().str() + "/" + x.r().str();
    }
    std::string radical;
    const Integer mag = abs(x.q());
    if (mag != 1) radical = mag.str() + "*";
    radical += "sqrt(" + x.d().str() + ")";

    std::string numer;
    bool single_term = true;
    if (x.p() == 0) {
        numer = (x.q() < 0 ? "-" : "") + radical;
    } else {
        numer = x.p().str() + (x.q() < 0 ? "-" : "+") + radical;
        single_term = false;
    }
    if (x.r() == 1) return numer;
    if (single_term) return numer + "/" + x.r().str();
    return "(" + numer + ")/" + x.r().str();
}

inline std::ostream& operator<<(std::ostream& os, const QuadraticSurd& x) { return os << to_string(x); }

/// Truncated decimal rendering for display only. The digits shown are
/// floor(x * 10^digits) and are exact; the value itself is not.
inline std::string approx_decimal(const QuadraticSurd& x, unsigned digits = 12) {
    if (x.signum() < 0) return "-" + approx_decimal(-x, digits);
    const Integer scale = boost::multiprecision::pow(Integer(10), digits);
    const QuadraticSurd shifted = x * QuadraticSurd(scale);
    const Integer scaled = floor(shifted);
    const Integer whole = scaled / scale;
    if (digits == 0) return whole.str();
    std::string tail = Integer(scaled - whole * scale).str();
    tail.insert(0, digits - tail.size(), '0');
    return whole.str() + "." + tail + (shifted.is_integer() ? "" : "...");
}

} // namespace twistlab

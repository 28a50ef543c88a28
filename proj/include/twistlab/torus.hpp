#pragma once

/**
 * @file torus.hpp
 * @brief Isomorphism and Morita equivalence of noncommutative tori A_theta
 *        for real quadratic theta.
 *
 * A_theta and A_theta' are isomorphic iff theta' = theta, and Morita
 * equivalent iff theta' = (a theta + b) / (c theta + d) for an integer matrix
 * of determinant +-1. Two irrationals are related that way exactly when their
 * continued fractions share an infinite tail; for quadratic theta the tail
 * class is the period up to rotation, which is what morita_invariant returns.
 *
 * Witnesses are built from tail alignments. If the expansion of t1 from
 * index i equals that of t2 from index j, both numbers are images of the same
 * complete quotient x under their prefix matrices C_i(t1), C_j(t2), and
 * M = C_j(t2) * C_i(t1)^-1 maps t1 to t2 with det M = (-1)^(i+j).
 */

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "twistlab/contfrac.hpp"
#include "twistlab/error.hpp"
#include "twistlab/surd.hpp"

namespace twistlab {

class TorusParameter {
public:
    explicit TorusParameter(QuadraticSurd theta) : theta_(std::move(theta)) {
        if (theta_.is_rational())
            throw Error(ErrorKind::rational_input, "torus parameter must be irrational");
    }

    const QuadraticSurd& theta() const noexcept { return theta_; }

    friend bool operator==(const TorusParameter&, const TorusParameter&) = default;

private:
    QuadraticSurd theta_;
};

/// Integer 2x2 matrix with determinant +1 or -1.
class UnimodularWitness {
public:
    UnimodularWitness(Integer a, Integer b, Integer c, Integer d)
        : UnimodularWitness(Matrix2{std::move(a), std::move(b), std::move(c), std::move(d)}) {}

    explicit UnimodularWitness(Matrix2 m) : m_(std::move(m)) {
        const Integer e = m_.det();
        if (e != 1 && e != -1)
            throw Error(ErrorKind::invalid_argument, "matrix determinant is " + e.str() + ", not +-1");
        det_ = e == 1 ? 1 : -1;
    }

    static UnimodularWitness identity() { return UnimodularWitness(Matrix2::identity()); }

    const Integer& a() const noexcept { return m_.a; }
    const Integer& b() const noexcept { return m_.b; }
    const Integer& c() const noexcept { return m_.c; }
    const Integer& d() const noexcept { return m_.d; }
    int det() const noexcept { return det_; }
    const Matrix2& matrix() const noexcept { return m_; }

    UnimodularWitness inverse() const { return UnimodularWitness(m_.unimodular_inverse()); }

    friend UnimodularWitness operator*(const UnimodularWitness& x, const UnimodularWitness& y) {
        return UnimodularWitness(x.m_ * y.m_);
    }
    friend bool operator==(const UnimodularWitness& x, const UnimodularWitness& y) { return x.m_ == y.m_; }

private:
    Matrix2 m_;
    int det_ = 1;
};

inline std::string to_string(const UnimodularWitness& w) {
    return "[[" + w.a().str() + ", " + w.b().str() + "], [" + w.c().str() + ", " + w.d().str() + "]]";
}

/// (a theta + b) / (c theta + d).
inline TorusParameter apply_mobius(const UnimodularWitness& m, const TorusParameter& t) {
    return TorusParameter(m.matrix().apply(t.theta()));
}

inline bool isomorphic(const TorusParameter& t1, const TorusParameter& t2) { return t1.theta() == t2.theta(); }

/// Canonical rotation of the minimal period: the normal form of the tail class.
inline Terms morita_invariant(const TorusParameter& t) {
    return canonical_rotation(expand_surd(t.theta()).period());
}

namespace detail {

inline bool same_tail(const EventuallyPeriodicCF& x, std::size_t i, const EventuallyPeriodicCF& y, std::size_t j) {
    // Past both preperiods, agreement over one period length repeats forever.
    const std::size_t pre_x = x.preperiod().size() > i ? x.preperiod().size() - i : 0;
    const std::size_t pre_y = y.preperiod().size() > j ? y.preperiod().size() - j : 0;
    const std::size_t horizon = std::max(pre_x, pre_y) + x.period().size();
    for (std::size_t k = 0; k < horizon; ++k) {
        if (x.term(i + k) != y.term(j + k)) return false;
    }
    return true;
}

// Size key for choosing among alignment witnesses: smaller entries first,
// determinant +1 preferred on ties.
inline auto witness_key(const UnimodularWitness& w) {
    const Integer mx = std::max({abs(w.a()), abs(w.b()), abs(w.c()), abs(w.d())});
    const Integer sum = abs(w.a()) + abs(w.b()) + abs(w.c()) + abs(w.d());
    return std::make_tuple(mx, sum, w.det() == 1 ? 0 : 1);
}

/// Every witness from tail alignments with offsets up to preperiod + 2 periods on each side.
inline std::vector<UnimodularWitness> alignment_witnesses(const EventuallyPeriodicCF& x,
                                                          const EventuallyPeriodicCF& y) {
    std::vector<UnimodularWitness> out;
    if (x.period().size() != y.period().size()) return out;
    const std::size_t n = x.period().size();
    const std::size_t limit_x = x.preperiod().size() + 2 * n;
    const std::size_t limit_y = y.preperiod().size() + 2 * n;

    std::vector<Matrix2> prefix_x{Matrix2::identity()};
    for (std::size_t i = 0; i < limit_x; ++i)
        prefix_x.push_back(prefix_x.back() * Matrix2::partial_quotient(x.term(i)));
    std::vector<Matrix2> prefix_y{Matrix2::identity()};
    for (std::size_t j = 0; j < limit_y; ++j)
        prefix_y.push_back(prefix_y.back() * Matrix2::partial_quotient(y.term(j)));

    for (std::size_t i = 0; i <= limit_x; ++i) {
        for (std::size_t j = 0; j <= limit_y; ++j) {
            if (!same_tail(x, i, y, j)) continue;
            UnimodularWitness w(prefix_y[j] * prefix_x[i].unimodular_inverse());
            if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(std::move(w));
        }
    }
    return out;
}

inline void verify_witness(const UnimodularWitness& w, const TorusParameter& t1, const TorusParameter& t2) {
    if (!(apply_mobius(w, t1) == t2))
        throw std::logic_error("internal: alignment witness failed exact verification");
}

} // namespace detail

/// A determinant +-1 witness mapping t1 to t2, or nullopt when the tail classes differ.
/// Among alignment witnesses the one with the smallest entries is returned.
inline std::optional<UnimodularWitness> morita_equivalent(const TorusParameter& t1, const TorusParameter& t2) {
    const auto x = expand_surd(t1.theta());
    const auto y = expand_surd(t2.theta());
    if (canonical_rotation(x.period()) != canonical_rotation(y.period())) return std::nullopt;
    auto candidates = detail::alignment_witnesses(x, y);
    if (candidates.empty()) throw std::logic_error("internal: equal periods but no tail alignment");
    auto best = std::min_element(candidates.begin(), candidates.end(), [](const auto& l, const auto& r) {
        return detail::witness_key(l) < detail::witness_key(r);
    });
    detail::verify_witness(*best, t1, t2);
    return *best;
}

struct Sl2Result {
    /// Determinant +1 witness, when one exists.
    std::optional<UnimodularWitness> witness;
    /// Set instead of `witness` when only determinant -1 maps relate the pair.
    std::optional<UnimodularWitness> improper;
};

/// Like morita_equivalent, but insists on determinant +1. Shifting an
/// alignment by one period flips the parity when the period length is odd;
/// for even period length every automorph has determinant +1, so the
/// determinant of the relation is fixed and may be -1.
inline Sl2Result sl2_witness(const TorusParameter& t1, const TorusParameter& t2) {
    const auto x = expand_surd(t1.theta());
    const auto y = expand_surd(t2.theta());
    if (canonical_rotation(x.period()) != canonical_rotation(y.period()))
        throw Error(ErrorKind::precondition, "parameters are not Morita equivalent");
    auto candidates = detail::alignment_witnesses(x, y);
    const UnimodularWitness* best_proper = nullptr;
    const UnimodularWitness* best_any = nullptr;
    for (const auto& w : candidates) {
        const auto key = detail::witness_key(w);
        if (!best_any || key < detail::witness_key(*best_any)) best_any = &w;
        if (w.det() == 1 && (!best_proper || key < detail::witness_key(*best_proper))) best_proper = &w;
    }
    if (!best_any) throw std::logic_error("internal: equal periods but no tail alignment");
    if (best_proper) {
        detail::verify_witness(*best_proper, t1, t2);
        return {*best_proper, std::nullopt};
    }
    detail::verify_witness(*best_any, t1, t2);
    return {std::nullopt, *best_any};
}

} // namespace twistlab

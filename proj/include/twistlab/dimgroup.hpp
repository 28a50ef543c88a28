#pragma once

/**
 * @file dimgroup.hpp
 * @brief Stationary dimension groups lim (Z^n, phi).
 *
 * Elements are pairs (v, k): the class of v in the k-th copy of Z^n. Since
 * phi is required to be nonsingular, (v, k) and (w, m) with k <= m are equal
 * exactly when phi^(m-k) v = w, so equality is decided by pushing forward.
 *
 * The limit order: an element is positive when phi^j v lands in the standard
 * cone for some j. For a primitive phi this is governed by the left Perron
 * eigenvector l: phi^j v ~ lambda^j <l, v> r. In rank 2 the pairing <l, v> is
 * an exact quadratic surd and the verdict is exact; in higher rank we iterate
 * up to a cap and admit "undecided" when the cap is hit.
 */

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "twistlab/contfrac.hpp"
#include "twistlab/error.hpp"
#include "twistlab/integer.hpp"
#include "twistlab/surd.hpp"
#include "twistlab/torus.hpp"

namespace twistlab {

using IntVector = std::vector<Integer>;

/// Dense square integer matrix, row-major.
class IntMatrix {
public:
    IntMatrix() = default;
    explicit IntMatrix(std::size_t n) : n_(n), data_(n * n, Integer(0)) {}

    static IntMatrix from_rows(const std::vector<IntVector>& rows) {
        const std::size_t n = rows.size();
        if (n == 0) throw Error(ErrorKind::invalid_argument, "empty matrix");
        IntMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (rows[i].size() != n) throw Error(ErrorKind::invalid_argument, "matrix is not square");
            for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t size() const noexcept { return n_; }
    Integer& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    std::vector<IntVector> rows() const {
        std::vector<IntVector> out(n_);
        for (std::size_t i = 0; i < n_; ++i) out[i].assign(data_.begin() + i * n_, data_.begin() + (i + 1) * n_);
        return out;
    }

    friend IntMatrix operator*(const IntMatrix& x, const IntMatrix& y) {
        IntMatrix z(x.n_);
        for (std::size_t i = 0; i < x.n_; ++i)
            for (std::size_t k = 0; k < x.n_; ++k) {
                if (x(i, k) == 0) continue;
                for (std::size_t j = 0; j < x.n_; ++j) z(i, j) += x(i, k) * y(k, j);
            }
        return z;
    }

    IntVector operator*(std::span<const Integer> v) const {
        IntVector out(n_, Integer(0));
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) out[i] += (*this)(i, j) * v[j];
        return out;
    }

    /// Fraction-free (Bareiss) elimination.
    Integer determinant() const {
        std::vector<Integer> a = data_;
        auto at = [&](std::size_t i, std::size_t j) -> Integer& { return a[i * n_ + j]; };
        Integer prev = 1;
        int sgn = 1;
        for (std::size_t k = 0; k + 1 < n_; ++k) {
            if (at(k, k) == 0) {
                std::size_t swap = k + 1;
                while (swap < n_ && at(swap, k) == 0) ++swap;
                if (swap == n_) return 0;
                for (std::size_t j = 0; j < n_; ++j) std::swap(at(k, j), at(swap, j));
                sgn = -sgn;
            }
            for (std::size_t i = k + 1; i < n_; ++i)
                for (std::size_t j = k + 1; j < n_; ++j)
                    at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
            prev = at(k, k);
        }
        return sgn * at(n_ - 1, n_ - 1);
    }

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<Integer> data_;
};

/// The class of `vector` in stage `stage` of the inductive system.
struct K0Element {
    std::uint64_t stage = 0;
    IntVector vector;
};

enum class Positivity { zero, strictly_positive, strictly_negative, infinitesimal_undecided };

constexpr std::string_view to_string(Positivity p) noexcept {
    switch (p) {
    case Positivity::zero: return "zero";
    case Positivity::strictly_positive: return "strictly-positive";
    case Positivity::strictly_negative: return "strictly-negative";
    case Positivity::infinitesimal_undecided: return "infinitesimal-undecided";
    }
    return "unknown";
}

inline constexpr std::size_t kDefaultIterationCap = 64;

class StationaryDimensionGroup {
public:
    /// Validates a square nonnegative matrix: primitive, then nonsingular.
    static StationaryDimensionGroup from_matrix(IntMatrix phi);

    /// phi = prod [[b_i, 1], [1, 0]] over a primitive word of positive integers.
    static StationaryDimensionGroup from_cf_period(std::span<const Integer> period);

    std::size_t rank() const noexcept { return phi_.size(); }
    const IntMatrix& phi() const noexcept { return phi_; }
    const Integer& determinant() const noexcept { return det_; }

    /// The shift [v, k] -> [phi v, k] is onto the limit exactly when |det phi| = 1.
    bool shift_is_automorphism() const noexcept { return det_ == 1 || det_ == -1; }

    /// Rank 2 only: left Perron eigenvector (lambda - d, b) for phi = [[a, b], [c, d]].
    const std::optional<std::pair<QuadraticSurd, QuadraticSurd>>& left_perron() const noexcept {
        return left_perron_;
    }
    /// Rank 2 only.
    const std::optional<QuadraticSurd>& perron_eigenvalue() const noexcept { return lambda_; }

    K0Element make_element(IntVector v, std::uint64_t stage = 0) const {
        if (v.size() != rank()) throw Error(ErrorKind::invalid_argument, "vector length does not match rank");
        return {stage, std::move(v)};
    }

    /// phi^k v.
    IntVector push(IntVector v, std::uint64_t k) const {
        for (std::uint64_t i = 0; i < k; ++i) v = phi_ * v;
        return v;
    }

    bool element_equal(const K0Element& x, const K0Element& y) const {
        check(x);
        check(y);
        if (x.stage <= y.stage) return push(x.vector, y.stage - x.stage) == y.vector;
        return push(y.vector, x.stage - y.stage) == x.vector;
    }

    K0Element add(const K0Element& x, const K0Element& y) const {
        check(x);
        check(y);
        const std::uint64_t stage = std::max(x.stage, y.stage);
        IntVector u = push(x.vector, stage - x.stage);
        const IntVector w = push(y.vector, stage - y.stage);
        for (std::size_t i = 0; i < u.size(); ++i) u[i] += w[i];
        return {stage, std::move(u)};
    }

    K0Element negate(const K0Element& x) const {
        check(x);
        K0Element out = x;
        for (auto& c : out.vector) c = -c;
        return out;
    }

    K0Element subtract(const K0Element& x, const K0Element& y) const { return add(x, negate(y)); }

    K0Element shift(const K0Element& x) const {
        check(x);
        return {x.stage, phi_ * x.vector};
    }

    Positivity is_positive(const K0Element& e, std::size_t iteration_cap = kDefaultIterationCap) const;

    /// Rank 2: r1 / r2 for the right Perron eigenvector r, i.e. the attracting
    /// fixed point of x -> (a x + b) / (c x + d). For phi built from a period
    /// this is the value of the purely periodic continued fraction.
    QuadraticSurd rank2_slope() const;

private:
    explicit StationaryDimensionGroup(IntMatrix phi, Integer det);

    void check(const K0Element& e) const {
        if (e.vector.size() != rank()) throw Error(ErrorKind::invalid_argument, "vector length does not match rank");
    }

    IntMatrix phi_;
    Integer det_;
    std::optional<QuadraticSurd> lambda_;
    std::optional<std::pair<QuadraticSurd, QuadraticSurd>> left_perron_;
};

/// A strictly positive element, fixed as the scale of a scaled dimension group.
class OrderUnit {
public:
    OrderUnit(const StationaryDimensionGroup& group, K0Element u, std::size_t iteration_cap = kDefaultIterationCap)
        : unit_(std::move(u)) {
        if (group.is_positive(unit_, iteration_cap) != Positivity::strictly_positive)
            throw Error(ErrorKind::invalid_argument, "order unit must be strictly positive");
    }

    const K0Element& element() const noexcept { return unit_; }

private:
    K0Element unit_;
};

// ---------------------------------------------------------------------------

namespace detail {

// Wielandt: a primitive n x n matrix has a strictly positive power of
// exponent at most n^2 - 2n + 2. Works on the zero pattern only.
inline bool is_primitive_pattern(const IntMatrix& phi) {
    const std::size_t n = phi.size();
    std::vector<char> base(n * n), power(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) base[i * n + j] = power[i * n + j] = phi(i, j) != 0;
    const std::size_t bound = n * n - 2 * n + 2;
    for (std::size_t e = 1;; ++e) {
        if (std::all_of(power.begin(), power.end(), [](char c) { return c != 0; })) return true;
        if (e >= bound) return false;
        std::vector<char> next(n * n, 0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                if (!power[i * n + k]) continue;
                for (std::size_t j = 0; j < n; ++j) next[i * n + j] |= base[k * n + j];
            }
        power = std::move(next);
    }
}

} // namespace detail

inline StationaryDimensionGroup StationaryDimensionGroup::from_matrix(IntMatrix phi) {
    const std::size_t n = phi.size();
    if (n == 0) throw Error(ErrorKind::invalid_argument, "empty matrix");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (phi(i, j) < 0) throw Error(ErrorKind::invalid_argument, "matrix entries must be nonnegative");
    if (!detail::is_primitive_pattern(phi)) throw Error(ErrorKind::not_primitive, "matrix is not primitive");
    Integer det = phi.determinant();
    if (det == 0) throw Error(ErrorKind::singular, "matrix is singular");
    return StationaryDimensionGroup(std::move(phi), std::move(det));
}

inline StationaryDimensionGroup StationaryDimensionGroup::from_cf_period(std::span<const Integer> period) {
    if (period.empty()) throw Error(ErrorKind::invalid_argument, "empty period");
    for (const auto& b : period)
        if (b < 1) throw Error(ErrorKind::invalid_argument, "period terms must be positive");
    if (!is_primitive_word(period)) throw Error(ErrorKind::not_primitive, "period is not a primitive word");
    const Matrix2 m = prefix_matrix(period);
    return from_matrix(IntMatrix::from_rows({{m.a, m.b}, {m.c, m.d}}));
}

inline StationaryDimensionGroup::StationaryDimensionGroup(IntMatrix phi, Integer det)
    : phi_(std::move(phi)), det_(std::move(det)) {
    if (rank() != 2) return;
    const Integer& a = phi_(0, 0);
    const Integer& b = phi_(0, 1);
    const Integer& c = phi_(1, 0);
    const Integer& d = phi_(1, 1);
    // lambda = (a + d + sqrt((a - d)^2 + 4bc)) / 2; primitivity gives b, c > 0.
    const Integer disc = (a - d) * (a - d) + 4 * b * c;
    lambda_ = QuadraticSurd::normalize(a + d, 1, 2, disc);
    left_perron_ = std::make_pair(*lambda_ - QuadraticSurd(d), QuadraticSurd(b));
}

inline Positivity StationaryDimensionGroup::is_positive(const K0Element& e, std::size_t iteration_cap) const {
    check(e);
    const bool all_zero = std::all_of(e.vector.begin(), e.vector.end(), [](const Integer& x) { return x == 0; });
    if (all_zero) return Positivity::zero;

    if (rank() == 2) {
        const auto& [l1, l2] = *left_perron_;
        const QuadraticSurd pairing = l1 * QuadraticSurd(e.vector[0]) + l2 * QuadraticSurd(e.vector[1]);
        const int s = pairing.signum();
        if (s > 0) return Positivity::strictly_positive;
        if (s < 0) return Positivity::strictly_negative;
        return Positivity::infinitesimal_undecided;
    }

    IntVector v = e.vector;
    for (std::size_t step = 0;; ++step) {
        if (std::all_of(v.begin(), v.end(), [](const Integer& x) { return x > 0; }))
            return Positivity::strictly_positive;
        if (std::all_of(v.begin(), v.end(), [](const Integer& x) { return x < 0; }))
            return Positivity::strictly_negative;
        if (step >= iteration_cap) return Positivity::infinitesimal_undecided;
        v = phi_ * v;
    }
}

inline QuadraticSurd StationaryDimensionGroup::rank2_slope() const {
    if (rank() != 2) throw Error(ErrorKind::precondition, "slope is defined for rank 2 only");
    if (lambda_->is_rational())
        throw Error(ErrorKind::not_cf_type, "Perron eigenvalue is rational; not of continued-fraction type");
    // a r1 + b r2 = lambda r1  =>  r1 / r2 = b / (lambda - a).
    return QuadraticSurd(phi_(0, 1)) / (*lambda_ - QuadraticSurd(phi_(0, 0)));
}

/// Morita equivalence of two rank-2 stationary groups through their slopes.
inline std::optional<UnimodularWitness> rank2_morita_equivalent(const StationaryDimensionGroup& g1,
                                                                const StationaryDimensionGroup& g2) {
    return morita_equivalent(TorusParameter(g1.rank2_slope()), TorusParameter(g2.rank2_slope()));
}

} // namespace twistlab

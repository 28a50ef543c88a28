#pragma once

// Short Weierstrass curves y^2 = x^3 + A x + B over Q: j-invariant, twists,
// and the two isomorphism levels (over Q by scaling, over C by j).

#include <optional>
#include <string>

#include "twistlab/error.hpp"
#include "twistlab/integer.hpp"

namespace twistlab {

class EllipticCurve {
public:
    EllipticCurve(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {
        if (discriminant_factor() == 0)
            throw Error(ErrorKind::singular, "singular curve: 4A^3 + 27B^2 = 0");
    }

    const Rational& a() const noexcept { return a_; }
    const Rational& b() const noexcept { return b_; }

    /// 4A^3 + 27B^2.
    Rational discriminant_factor() const { return 4 * a_ * a_ * a_ + 27 * b_ * b_; }

    // Exact special-j tests: j = 0 iff A = 0, j = 1728 iff B = 0.
    bool has_j_zero() const noexcept { return a_ == 0; }
    bool has_j_1728() const noexcept { return b_ == 0; }

    friend bool operator==(const EllipticCurve&, const EllipticCurve&) = default;

private:
    Rational a_;
    Rational b_;
};

class TwistParameter {
public:
    TwistParameter(Rational t) : t_(std::move(t)) { // NOLINT: implicit by intent
        if (t_ == 0) throw Error(ErrorKind::invalid_argument, "twist parameter must be nonzero");
    }
    TwistParameter(int t) : TwistParameter(Rational(t)) {} // NOLINT

    const Rational& value() const noexcept { return t_; }

    friend bool operator==(const TwistParameter&, const TwistParameter&) = default;

private:
    Rational t_;
};

/// 1728 * 4A^3 / (4A^3 + 27B^2).
inline Rational j_invariant(const EllipticCurve& e) {
    const Rational four_a3 = 4 * e.a() * e.a() * e.a();
    return 1728 * four_a3 / e.discriminant_factor();
}

inline EllipticCurve twist(const EllipticCurve& e, const TwistParameter& tp) {
    const Rational& t = tp.value();
    if (e.has_j_zero()) return {0, t * e.b()};
    if (e.has_j_1728()) return {t * e.a(), 0};
    return {t * t * e.a(), t * t * t * e.b()};
}

inline bool c_isomorphic(const EllipticCurve& e1, const EllipticCurve& e2) {
    return j_invariant(e1) == j_invariant(e2);
}

/// Positive rational u with A2 = u^4 A1 and B2 = u^6 B1, if any. (-u works too.)
inline std::optional<Rational> q_isomorphism(const EllipticCurve& e1, const EllipticCurve& e2) {
    if (e1.has_j_zero() != e2.has_j_zero() || e1.has_j_1728() != e2.has_j_1728()) return std::nullopt;
    std::optional<Rational> u;
    if (e1.has_j_zero()) {
        u = exact_root(Rational(e2.b() / e1.b()), 6);
    } else if (e1.has_j_1728()) {
        u = exact_root(Rational(e2.a() / e1.a()), 4);
    } else {
        // u^2 = (B2/B1) / (A2/A1); then both defining equations are checked.
        u = exact_root(Rational((e2.b() * e1.a()) / (e1.b() * e2.a())), 2);
    }
    if (!u) return std::nullopt;
    const Rational u2 = *u * *u;
    const Rational u4 = u2 * u2;
    if (e2.a() != u4 * e1.a() || e2.b() != u4 * u2 * e1.b()) return std::nullopt;
    return u;
}

inline bool q_isomorphic(const EllipticCurve& e1, const EllipticCurve& e2) {
    return q_isomorphism(e1, e2).has_value();
}

/// The t with twist(e1, t) = e2, if e2 lies in the twist family of e1.
inline std::optional<TwistParameter> twist_between(const EllipticCurve& e1, const EllipticCurve& e2) {
    if (!c_isomorphic(e1, e2)) throw Error(ErrorKind::precondition, "curves have different j-invariants");
    Rational t;
    if (e1.has_j_zero()) {
        t = e2.b() / e1.b();
    } else if (e1.has_j_1728()) {
        t = e2.a() / e1.a();
    } else {
        const Rational ratio_a = e2.a() / e1.a();
        const Rational ratio_b = e2.b() / e1.b();
        t = ratio_b / ratio_a;
        if (t * t != ratio_a || t * t * t != ratio_b) return std::nullopt;
    }
    if (!(twist(e1, t) == e2)) return std::nullopt;
    return TwistParameter(t);
}

inline std::string to_string(const EllipticCurve& e) {
    return "y^2 = x^3 + (" + to_string(e.a()) + ")x + (" + to_string(e.b()) + ")";
}

} // namespace twistlab

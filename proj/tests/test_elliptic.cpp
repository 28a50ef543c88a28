#include <gtest/gtest.h>

#include <random>

#include "twistlab/elliptic.hpp"

using namespace twistlab;

namespace {

EllipticCurve E(long a, long b) { return EllipticCurve(Rational(a), Rational(b)); }

} // namespace

TEST(Curve, RejectsSingular) {
    // 4(-3)^3 + 27(2)^2 = 0
    try {
        E(-3, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::singular);
    }
    EXPECT_THROW(E(0, 0), Error);
    EXPECT_THROW(TwistParameter(0), Error);
}

TEST(JInvariant, WorkedExamples) {
    EXPECT_EQ(j_invariant(E(1, 0)), 1728);
    EXPECT_EQ(j_invariant(E(0, 1)), 0);
    EXPECT_EQ(j_invariant(E(1, 1)), Rational(6912, 31));
}

TEST(Twist, WorkedExamples) {
    EXPECT_EQ(twist(E(1, 1), 2), E(4, 8));
    EXPECT_EQ(twist(E(1, 0), 3), E(3, 0));
    EXPECT_EQ(twist(E(0, 1), 5), E(0, 5));
    EXPECT_EQ(twist(E(2, -3), Rational(-1, 2)), EllipticCurve(Rational(1, 2), Rational(3, 8)));
}

TEST(Twist, PreservesJAndComposes) {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> c(-9, 9), den(1, 5);
    for (int i = 0; i < 300; ++i) {
        Rational a(c(rng), den(rng)), b(c(rng), den(rng));
        if (i % 5 == 0) a = 0;
        if (i % 7 == 0) b = 0;
        if (4 * a * a * a + 27 * b * b == 0) continue;
        const EllipticCurve e(a, b);
        Rational t(c(rng), den(rng)), s(c(rng), den(rng));
        if (t == 0 || s == 0) continue;
        ASSERT_EQ(j_invariant(twist(e, t)), j_invariant(e));
        ASSERT_EQ(twist(e, 1), e);
        ASSERT_EQ(twist(twist(e, t), s), twist(e, Rational(t * s)));
    }
}

TEST(CIsomorphic, WorkedExamples) {
    EXPECT_TRUE(c_isomorphic(E(1, 1), twist(E(1, 1), 2)));
    EXPECT_FALSE(c_isomorphic(E(1, 0), E(0, 1)));
    EXPECT_TRUE(c_isomorphic(E(5, 7), E(5, 7)));
}

TEST(QIsomorphic, WorkedExamples) {
    auto u = q_isomorphism(E(1, 1), E(16, 64));
    ASSERT_TRUE(u);
    EXPECT_EQ(*u, 2);
    EXPECT_FALSE(q_isomorphic(E(1, 1), E(4, 8)));
    u = q_isomorphism(E(1, 1), E(1, 1));
    ASSERT_TRUE(u);
    EXPECT_EQ(*u, 1);
}

TEST(QIsomorphic, SpecialJBranches) {
    // j = 1728: only u^4 matters; B = 0 on both sides.
    EXPECT_EQ(*q_isomorphism(E(3, 0), EllipticCurve(Rational(3, 16), 0)), Rational(1, 2));
    EXPECT_FALSE(q_isomorphic(E(3, 0), E(-3, 0))); // u^4 = -1
    // j = 0: u^6.
    EXPECT_EQ(*q_isomorphism(E(0, 2), E(0, 128)), 2);
    EXPECT_FALSE(q_isomorphic(E(0, 2), E(0, 16)));
    EXPECT_FALSE(q_isomorphic(E(0, 2), E(0, -2)));
    // Zero patterns must agree.
    EXPECT_FALSE(q_isomorphic(E(1, 0), E(0, 1)));
}

TEST(QIsomorphic, ImpliesCIsomorphicAndComposes) {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> c(-6, 6), den(1, 4);
    for (int i = 0; i < 200; ++i) {
        const EllipticCurve e(Rational(c(rng) | 1, den(rng)), Rational(c(rng) | 1, den(rng)));
        const Rational u(c(rng) | 1, den(rng)), v(c(rng) | 1, den(rng));
        const EllipticCurve f(u * u * u * u * e.a(), u * u * u * u * u * u * e.b());
        const EllipticCurve g(v * v * v * v * f.a(), v * v * v * v * v * v * f.b());
        ASSERT_TRUE(c_isomorphic(e, f));
        auto ef = q_isomorphism(e, f);
        auto fg = q_isomorphism(f, g);
        auto eg = q_isomorphism(e, g);
        ASSERT_TRUE(ef && fg && eg);
        ASSERT_EQ(*eg, *ef * *fg);
        ASSERT_TRUE(q_isomorphic(f, e));
    }
}

TEST(QIsomorphic, TrivialTwistIffSquare) {
    const auto e = E(1, 1);
    for (int t : {1, -1, 2, -2, 4, 9, 8, 16}) {
        const bool square = t > 0 && exact_root(Rational(t), 2).has_value();
        EXPECT_EQ(q_isomorphic(e, twist(e, t)), square) << "t = " << t;
    }
}

TEST(TwistBetween, WorkedExamples) {
    EXPECT_EQ(twist_between(E(1, 1), E(4, 8))->value(), 2);
    EXPECT_EQ(twist_between(E(1, 0), E(3, 0))->value(), 3);
    EXPECT_EQ(twist_between(E(1, 1), E(1, 1))->value(), 1);
    EXPECT_EQ(twist_between(E(0, 1), E(0, -7))->value(), -7);
    try {
        (void)twist_between(E(1, 0), E(0, 1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::precondition);
    }
}

TEST(TwistBetween, InvertsTwist) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> c(-7, 7), den(1, 4);
    for (int i = 0; i < 200; ++i) {
        Rational a(c(rng), den(rng)), b(c(rng), den(rng));
        if (4 * a * a * a + 27 * b * b == 0) continue;
        const EllipticCurve e(a, b);
        const Rational t(c(rng) | 1, den(rng));
        auto back = twist_between(e, twist(e, t));
        ASSERT_TRUE(back);
        ASSERT_EQ(twist(e, *back), twist(e, t));
    }
}

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "twistlab/torus.hpp"

using namespace twistlab;

namespace {

TorusParameter P(const char* text) { return TorusParameter(parse_surd(text)); }

Terms T(std::initializer_list<int> xs) {
    Terms out;
    for (int x : xs) out.emplace_back(x);
    return out;
}

} // namespace

TEST(Torus, RejectsRationalParameter) {
    EXPECT_THROW(TorusParameter(QuadraticSurd(Rational(1, 2))), Error);
}

TEST(Witness, DeterminantValidated) {
    EXPECT_THROW(UnimodularWitness(2, 0, 0, 1), Error);
    EXPECT_THROW(UnimodularWitness(0, 0, 0, 0), Error);
    EXPECT_EQ(UnimodularWitness(1, 1, 1, 0).det(), -1);
    EXPECT_EQ(UnimodularWitness(2, 1, 1, 1).det(), 1);
}

TEST(ApplyMobius, WorkedExamples) {
    EXPECT_EQ(apply_mobius(UnimodularWitness(1, 1, 0, 1), P("sqrt(2)")), P("1+sqrt(2)"));
    EXPECT_EQ(apply_mobius(UnimodularWitness::identity(), P("(3-sqrt(7))/5")), P("(3-sqrt(7))/5"));
    EXPECT_EQ(apply_mobius(UnimodularWitness(1, 1, 1, 0), P("sqrt(2)")), P("(2+sqrt(2))/2"));
}

TEST(Isomorphic, WorkedExamples) {
    EXPECT_TRUE(isomorphic(P("sqrt(2)"), P("sqrt(2)")));
    EXPECT_FALSE(isomorphic(P("sqrt(2)"), P("1+sqrt(2)")));
    EXPECT_TRUE(isomorphic(P("(2+2*sqrt(2))/2"), P("1+sqrt(2)")));
}

TEST(MoritaEquivalent, WorkedExamples) {
    auto w1 = morita_equivalent(P("sqrt(2)"), P("1+sqrt(2)"));
    ASSERT_TRUE(w1);
    EXPECT_EQ(*w1, UnimodularWitness(1, 1, 0, 1));
    EXPECT_EQ(w1->det(), 1);

    auto w2 = morita_equivalent(P("sqrt(2)"), P("(2+sqrt(2))/2"));
    ASSERT_TRUE(w2);
    EXPECT_EQ(*w2, UnimodularWitness(1, 1, 1, 0));
    EXPECT_EQ(w2->det(), -1);

    EXPECT_FALSE(morita_equivalent(P("sqrt(2)"), P("(1+sqrt(5))/2")));
}

TEST(MoritaEquivalent, DifferentFieldsAreNotEquivalent) {
    // Same tail length, different fields: sqrt(2) = [1; (2)], sqrt(5) = [2; (4)].
    EXPECT_FALSE(morita_equivalent(P("sqrt(2)"), P("sqrt(5)")));
}

TEST(MoritaEquivalent, EquivalenceRelationOnOneTailClass) {
    std::mt19937_64 rng(4);
    const auto base = P("(1+sqrt(13))/3");
    for (int i = 0; i < 30; ++i) {
        const auto x = apply_mobius(UnimodularWitness(oracle::random_word(rng)), base);
        const auto y = apply_mobius(UnimodularWitness(oracle::random_word(rng)), base);
        const auto z = apply_mobius(UnimodularWitness(oracle::random_word(rng)), base);
        auto refl = morita_equivalent(x, x);
        ASSERT_TRUE(refl);
        EXPECT_EQ(*refl, UnimodularWitness::identity());
        auto xy = morita_equivalent(x, y);
        auto yx = morita_equivalent(y, x);
        auto yz = morita_equivalent(y, z);
        ASSERT_TRUE(xy && yx && yz);
        EXPECT_EQ(apply_mobius(xy->inverse(), y), x);
        EXPECT_EQ(apply_mobius(*yz * *xy, x), z);
        auto xz = morita_equivalent(x, z);
        ASSERT_TRUE(xz);
        EXPECT_EQ(apply_mobius(*xz, x), z);
    }
}

TEST(Sl2Witness, WorkedExamples) {
    auto a = sl2_witness(P("sqrt(2)"), P("1+sqrt(2)"));
    ASSERT_TRUE(a.witness);
    EXPECT_EQ(*a.witness, UnimodularWitness(1, 1, 0, 1));

    auto b = sl2_witness(P("sqrt(2)"), P("(2+sqrt(2))/2"));
    ASSERT_TRUE(b.witness);
    EXPECT_EQ(b.witness->det(), 1);
    EXPECT_EQ(apply_mobius(*b.witness, P("sqrt(2)")), P("(2+sqrt(2))/2"));

    auto c = sl2_witness(P("(1+sqrt(5))/2"), P("(1+sqrt(5))/2"));
    ASSERT_TRUE(c.witness);
    EXPECT_EQ(*c.witness, UnimodularWitness::identity());

    EXPECT_THROW(sl2_witness(P("sqrt(2)"), P("sqrt(3)")), Error);
}

TEST(Sl2Witness, EvenPeriodCanForceImproperRelation) {
    // sqrt(3) = [1; (1, 2)] has even period, so x -> 1/x (det -1) cannot be
    // corrected by an automorph.
    const auto x = P("sqrt(3)");
    const auto y = apply_mobius(UnimodularWitness(0, 1, 1, 0), x);
    auto r = sl2_witness(x, y);
    EXPECT_FALSE(r.witness);
    ASSERT_TRUE(r.improper);
    EXPECT_EQ(r.improper->det(), -1);
    EXPECT_EQ(apply_mobius(*r.improper, x), y);
    // Cross-check against words in SL(2, Z) only (T, T^-1, S): none reaches y.
    // Exhaustive up to length 8 in the meet-in-the-middle ball.
    std::set<std::tuple<Integer, Integer, Integer, Integer>> from_x{oracle::key(x.theta())};
    std::vector<QuadraticSurd> frontier{x.theta()};
    for (int step = 0; step < 8; ++step) {
        std::vector<QuadraticSurd> next;
        for (const auto& v : frontier)
            for (int g = 0; g < 3; ++g) {
                auto z = oracle::act(g, v);
                if (z && from_x.insert(oracle::key(*z)).second) next.push_back(*z);
            }
        frontier = std::move(next);
    }
    EXPECT_EQ(from_x.count(oracle::key(y.theta())), 0u);
}

TEST(MoritaInvariant, WorkedExamples) {
    EXPECT_EQ(morita_invariant(P("sqrt(2)")), T({2}));
    EXPECT_EQ(morita_invariant(P("1+sqrt(2)")), T({2}));
    EXPECT_EQ(morita_invariant(P("(1+sqrt(5))/2")), T({1}));
    EXPECT_EQ(morita_invariant(P("sqrt(7)")), T({1, 1, 1, 4}));
}

TEST(MoritaInvariant, InvariantUnderRandomWords) {
    std::mt19937_64 rng(12);
    for (const char* base : {"sqrt(2)", "sqrt(3)", "(1+sqrt(5))/2", "(2-3*sqrt(11))/7"}) {
        const auto t = P(base);
        const auto inv = morita_invariant(t);
        for (int i = 0; i < 50; ++i) {
            const auto image = apply_mobius(UnimodularWitness(oracle::random_word(rng)), t);
            ASSERT_EQ(morita_invariant(image), inv);
        }
    }
}

TEST(MoritaEquivalent, WitnessesAreSoundAndMatchBruteForce) {
    std::mt19937_64 rng(6);
    int positives = 0;
    for (int i = 0; i < 40; ++i) {
        const auto x = oracle::random_surd(rng, 4, 4, 12);
        QuadraticSurd y = oracle::random_surd(rng, 4, 4, 12);
        if (i % 2 == 0) y = oracle::random_word(rng, 5).apply(x);
        const TorusParameter tx(x), ty(y);
        const auto w = morita_equivalent(tx, ty);
        if (w) {
            EXPECT_EQ(apply_mobius(*w, tx), ty);
            EXPECT_TRUE(w->det() == 1 || w->det() == -1);
        }
        if (oracle::word_equivalent(x, y, 5)) {
            ++positives;
            EXPECT_TRUE(w.has_value()) << to_string(x) << " ~ " << to_string(y);
        }
        EXPECT_EQ(w.has_value(), morita_invariant(tx) == morita_invariant(ty));
    }
    EXPECT_GT(positives, 10);
}

TEST(Isomorphic, ImpliesMoritaEquivalent) {
    std::mt19937_64 rng(61);
    for (int i = 0; i < 50; ++i) {
        const TorusParameter t(oracle::random_surd(rng));
        const TorusParameter same(QuadraticSurd::normalize(t.theta().p() * 3, t.theta().q() * 3, t.theta().r() * 3,
                                                           t.theta().d()));
        ASSERT_TRUE(isomorphic(t, same));
        ASSERT_TRUE(morita_equivalent(t, same));
    }
}

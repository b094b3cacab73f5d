#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sqfap/pipeline.hpp"

using namespace sqfap;

TEST(Decompose, Examples) {
    EXPECT_EQ(decompose_error(30, factor_modulus(5), 1), Rational(5, 4));
    EXPECT_EQ(decompose_error(5000, factor_modulus(1), 0), Rational(0));
    EXPECT_EQ(decompose_error(1000, factor_modulus(7), 3), Rational(5, 2));  // oracle: 5/6 + 5/3
}

TEST(Decompose, MatchesDirectOnRandomInputs) {
    std::mt19937_64 rng(500);
    int checked = 0;
    while (checked < 500) {
        const u64 X = rng() % 10000 + 1;
        const u64 q = rng() % 100 + 1;
        if (!is_squarefree(q)) continue;
        const u64 a = rng() % q;
        if (std::gcd(a, q) != 1) continue;
        const auto mod = factor_modulus(q);
        ASSERT_EQ(decompose_error(X, mod, static_cast<i64>(a)), error_term(X, mod, static_cast<i64>(a)).E)
            << X << " " << q << " " << a;
        ++checked;
    }
}

TEST(TailSplit, FrozenValuesAndBoundaries) {
    const auto five = factor_modulus(5);
    const auto s = tail_split(30, five, 1, 2);
    EXPECT_EQ(s.head, Rational(3, 4));
    EXPECT_EQ(s.tail, Rational(1, 2));

    const auto seven = factor_modulus(7);
    const auto t = tail_split(1000, seven, 3, 5);
    EXPECT_EQ(t.head, Rational(5, 6));
    EXPECT_EQ(t.tail, Rational(5, 3));

    const auto top = tail_split(10000, seven, 3, 100);
    EXPECT_EQ(top.head, Rational(0));
    EXPECT_EQ(top.tail, error_term(10000, seven, 3).E);

    const auto bottom = tail_split(10000, seven, 3, 1);
    EXPECT_EQ(bottom.tail, delta(10000, seven, 3));

    EXPECT_THROW(tail_split(100, seven, 3, 0.5), input_error);
    EXPECT_THROW(tail_split(100, seven, 3, 11), input_error);
}

TEST(TailSplit, ReassemblesForEveryCut) {
    const auto mod = factor_modulus(42 + 1);  // 43
    const Rational E = error_term(20000, mod, 5).E;
    for (double n0 = 1; n0 <= std::sqrt(20000.0); n0 += 3.7) {
        const auto s = tail_split(20000, mod, 5, n0);
        ASSERT_EQ(s.head + s.tail, E) << n0;
    }
}

TEST(EnumerateBoxes, PowerOfTwoGrid) {
    const u64 X = u64{1} << 20;
    const auto boxes = enumerate_boxes(X, 1, 1, BoxConditions::cond2);
    std::vector<DyadicBox> expected;
    for (int i = 0; i <= 23; ++i)
        for (int j = 0; i + 2 * j <= 23; ++j) expected.push_back({std::ldexp(1.0, i), std::ldexp(1.0, j)});
    EXPECT_EQ(boxes, expected);
    EXPECT_TRUE(enumerate_boxes(1000, 1, 8001).empty());
}

TEST(EnumerateBoxes, ExhaustiveAgainstConditions) {
    for (u64 X : {1000u, 100000u, 1000000u}) {
        for (double M0 : {1.0, 3.5, 100.0}) {
            for (double N0 : {1.0, 2.25, 100.0}) {
                for (auto which : {BoxConditions::cond1, BoxConditions::cond2}) {
                    const auto boxes = enumerate_boxes(X, N0, M0, which);
                    const double m_start = which == BoxConditions::cond1 ? 1.0 : M0;
                    std::vector<DyadicBox> expected;
                    for (int i = 0; i < 64; ++i)
                        for (int j = 0; j < 64; ++j) {
                            const double M = std::ldexp(m_start, i), N = std::ldexp(N0, j);
                            const bool ok = which == BoxConditions::cond1 ? satisfies_cond1(M, N, X, N0)
                                                                          : satisfies_cond2(M, N, X, M0, N0);
                            if (ok) expected.push_back({M, N});
                        }
                    ASSERT_EQ(boxes, expected);
                    for (const auto& b : boxes) ASSERT_LE(b.M * b.N * b.N, 8.0 * static_cast<double>(X));
                }
            }
        }
    }
}

TEST(SmallMEstimate, Examples) {
    const auto mod = factor_modulus(101);
    EXPECT_DOUBLE_EQ(small_M_estimate(1, 101, mod), 2.0);
    EXPECT_LT(small_M_estimate(7, 50, mod), 14.0);
}

TEST(StandardChoices, FormulaAndClamping) {
    const auto c = standard_choices(1000000, factor_modulus(3989));  // prime near X^0.6
    EXPECT_NEAR(c.M0, 2 * 1e6 * std::pow(3989.0, -1.5), 1e-9);
    EXPECT_NEAR(c.N0, 2 * 1000.0 * std::pow(3989.0, -0.375), 1e-9);
    EXPECT_FALSE(c.clamped);
    const auto one = standard_choices(10000, factor_modulus(1));
    EXPECT_TRUE(one.clamped);
    EXPECT_LE(one.N0, 100.0);
    EXPECT_LE(one.M0, 10000.0);
}

TEST(PipelineReport, IdentityAndMajorization) {
    const auto mod = factor_modulus(101);
    const auto c = standard_choices(10000, mod);
    const auto rep = pipeline_report(10000, mod, 3, c.M0, c.N0, Rational(2, 15));
    EXPECT_EQ(rep.E_direct, rep.E_decomposed);
    EXPECT_EQ(rep.head + rep.tail_small_n, rep.E_direct);
    EXPECT_LE(abs(rep.E_direct), rep.majorant);
    EXPECT_LE(rep.majorant, rep.coarse_majorant);
    EXPECT_LE(rep.progression_sum, rep.box_total);
    for (const auto& b : rep.boxes) {
        EXPECT_TRUE(b.cond1 || b.bottom_row);
        if (!b.small_m) {
            EXPECT_TRUE(b.cond2);
        }
        EXPECT_EQ(b.count, count_dyadic(b.M, b.N, mod, 3));
    }
}

TEST(PipelineReport, DegenerateModulus) {
    const auto rep = pipeline_report(5000, factor_modulus(1), 0, 2, 3, Rational(2, 15));
    EXPECT_EQ(rep.E_direct, Rational(0));
    EXPECT_EQ(rep.E_decomposed, Rational(0));
}

TEST(PipelineReport, HeadMajorizedByProgressionSum) {
    // |head| <= Σ count_ap + |cross|: the exact form of the step before dyadic splitting.
    std::mt19937_64 rng(8);
    for (int i = 0; i < 30; ++i) {
        const u64 X = rng() % 200000 + 100;
        u64 q = rng() % 2000 + 1;
        while (!is_squarefree(q)) ++q;
        const auto mod = factor_modulus(q);
        u64 a = rng() % q;
        while (std::gcd(a, q) != 1) a = (a + 1) % q;
        const double root = std::sqrt(static_cast<double>(X));
        const double N0 = 1 + static_cast<double>(rng() % 1000) / 1000.0 * (root - 1);
        const double M0 = 1 + static_cast<double>(rng() % 50);
        const auto rep = pipeline_report(X, mod, static_cast<i64>(a), M0, N0, Rational(2, 15));
        ASSERT_LE(abs(rep.head), Rational(static_cast<sqfap::int128>(rep.progression_sum)) + abs(rep.main_term_removed));
    }
}

TEST(PipelineReport, RejectsBadParameters) {
    const auto mod = factor_modulus(101);
    EXPECT_THROW(pipeline_report(10000, mod, 3, 0.5, 2, Rational(2, 15)), input_error);
    EXPECT_THROW(pipeline_report(10000, mod, 3, 2, 200, Rational(2, 15)), input_error);
    EXPECT_THROW(pipeline_report(10000, mod, 101, 2, 2, Rational(2, 15)), input_error);
}

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sqfap/progression.hpp"

using namespace sqfap;

TEST(CountAp, Examples) {
    EXPECT_EQ(count_ap(u64{10}, 3, 1), 4u);
    EXPECT_EQ(count_ap(u64{17}, 1, 0), 17u);
    EXPECT_EQ(count_ap(0.5, 3, 1), 0u);
    EXPECT_EQ(count_ap(10.9, 3, 1), 4u);
    EXPECT_EQ(count_ap(u64{10}, 3, -2), 4u);  // -2 ≡ 1
}

TEST(CountAp, ClassesPartitionTheInterval) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        const u64 x = rng() % 100000;
        const u64 q = rng() % 300 + 1;
        u64 total = 0;
        for (u64 a = 0; a < q; ++a) total += count_ap(x, q, static_cast<i64>(a));
        ASSERT_EQ(total, x);
    }
}

TEST(CountCoprime, Examples) {
    EXPECT_EQ(count_coprime(u64{10}, factor_modulus(3)), 7u);
    EXPECT_EQ(count_coprime(u64{123}, factor_modulus(1)), 123u);
    EXPECT_EQ(count_coprime(u64{30}, factor_modulus(30)), 8u);
}

TEST(CountCoprime, MatchesGcdScan) {
    for (u64 q = 1; q <= 100; ++q) {
        if (!is_squarefree(q)) continue;
        const auto mod = factor_modulus(q);
        u64 brute = 0;
        for (u64 x = 0; x <= 1000; ++x) {
            if (x > 0) brute += std::gcd(x, q) == 1;
            ASSERT_EQ(count_coprime(x, mod), brute) << x << " " << q;
        }
    }
}

TEST(Delta, Examples) {
    EXPECT_EQ(delta(10, factor_modulus(3), 1), Rational(1, 2));
    EXPECT_EQ(delta(77, factor_modulus(1), 0), Rational(0));
    EXPECT_EQ(delta(30, factor_modulus(5), 1), Rational(0));
}

TEST(Delta, SanityEnvelope) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 500; ++i) {
        const u64 q = rng() % 200 + 1;
        if (!is_squarefree(q)) continue;
        const auto mod = factor_modulus(q);
        const u64 x = rng() % 50000;
        const Rational d = delta(x, mod, static_cast<i64>(rng() % q));
        const Rational env = Rational(static_cast<long long>(x), static_cast<long long>(q)) + Rational(1) +
                             Rational(static_cast<long long>(x), static_cast<long long>(mod.phi));
        ASSERT_LE(abs(d), env);
    }
}

TEST(SqfreeCounts, Examples) {
    const auto five = factor_modulus(5);
    EXPECT_EQ(sqfree_count_ap(30, five, 1), 5u);
    EXPECT_EQ(sqfree_count_coprime(30, five), 15u);
    EXPECT_EQ(sqfree_count_ap(1, five, 1), 1u);
    EXPECT_THROW(sqfree_count_ap(30, five, 10), input_error);
}

TEST(ErrorTerm, Examples) {
    EXPECT_EQ(error_term(30, factor_modulus(5), 1).E, Rational(5, 4));
    EXPECT_EQ(error_term(12345, factor_modulus(1), 0).E, Rational(0));
    // frozen from the brute-force oracle: 10 − 53/6
    const auto e = error_term(100, factor_modulus(7), 3);
    EXPECT_EQ(e.progression_count, 10u);
    EXPECT_EQ(e.coprime_count, 53u);
    EXPECT_EQ(e.E, Rational(7, 6));
    EXPECT_THROW(error_term(100, factor_modulus(6), 2), input_error);
}

TEST(ErrorTerm, MatchesOracleOnGrid) {
    // X up to 10^4, squarefree q <= 100, every unit a: sampled to keep the
    // O(X) oracle affordable; the acceptance suite covers the full grid via
    // the decomposition.
    std::mt19937_64 rng(17);
    for (int i = 0; i < 300; ++i) {
        const u64 X = rng() % 10000 + 1;
        const u64 q = rng() % 100 + 1;
        if (!is_squarefree(q)) continue;
        const u64 a = rng() % q;
        if (std::gcd(a, q) != 1) continue;
        ASSERT_EQ(error_term(X, factor_modulus(q), static_cast<i64>(a)).E, oracle::error_term(X, q, a))
            << X << " " << q << " " << a;
    }
}

TEST(ErrorTerm, WindowedCountsAgreeWithDirect) {
    const auto w = mobius_sieve(5000);
    for (u64 q : {1u, 2u, 6u, 35u, 97u}) {
        const auto mod = factor_modulus(q);
        const auto cc = class_counts(w, 5000, mod);
        for (u64 a = 0; a < q; ++a) {
            if (std::gcd(a, q) != 1) continue;
            ASSERT_EQ(error_term(cc, 5000, mod, static_cast<i64>(a)).E, error_term(5000, mod, static_cast<i64>(a)).E);
        }
    }
}

TEST(ReferenceRatio, Examples) {
    const double r = reference_ratio(30, factor_modulus(5), 1);
    EXPECT_DOUBLE_EQ(r, 1.25 / (std::sqrt(6.0) + std::sqrt(5.0)));
    EXPECT_EQ(reference_ratio(999, factor_modulus(1), 0), 0.0);
}

TEST(LeastSquarefree, Examples) {
    EXPECT_EQ(least_squarefree(factor_modulus(5), 1), 1u);
    EXPECT_EQ(least_squarefree(factor_modulus(7), 4), 11u);
    EXPECT_EQ(least_squarefree(factor_modulus(10), 9), 19u);
    EXPECT_EQ(least_squarefree(factor_modulus(1), 0), 1u);
    EXPECT_THROW(least_squarefree(factor_modulus(10), 5), input_error);
}

TEST(LeastSquarefree, CeilingExceededIsAnError) {
    // 4 ≡ 4 (mod 5) is not squarefree; a ceiling of 4 leaves nothing to scan.
    EXPECT_THROW(least_squarefree(factor_modulus(5), 4, 4), invariant_error);
}

TEST(LeastSquarefree, MinimalityAgainstRescan) {
    const auto window = mobius_sieve(20000);
    for (u64 q = 1; q <= 300; ++q) {
        if (!is_squarefree(q)) continue;
        const auto mod = factor_modulus(q);
        const auto all = least_squarefree_all(mod, window);
        for (u64 a = 0; a < q; ++a) {
            if (std::gcd(a, q) != 1) continue;
            const u64 n = least_squarefree(mod, static_cast<i64>(a));
            ASSERT_EQ(n, all[a]);
            ASSERT_EQ(n % q, a % q);
            ASSERT_NE(oracle::mu(n), 0);
            for (u64 m = (a == 0 ? q : a); m < n; m += q) ASSERT_EQ(oracle::mu(m), 0) << q << " " << a;
        }
    }
}

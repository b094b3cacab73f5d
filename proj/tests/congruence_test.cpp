#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sqfap/congruence.hpp"

using namespace sqfap;

namespace {

u64 oracle_full(int u, int v, double M, double N, u64 q, u64 a) {
    return oracle::box_count(u, v, 0, static_cast<u64>(M), 0, static_cast<u64>(N), q, a);
}

std::vector<u64> squarefree_upto(u64 limit) {
    std::vector<u64> out;
    for (u64 q = 1; q <= limit; ++q)
        if (is_squarefree(q)) out.push_back(q);
    return out;
}

}  // namespace

TEST(Roots, SquareRootsModPrime) {
    for (u64 p : {2u, 3u, 5u, 7u, 13u, 17u, 41u, 97u, 257u, 65537u}) {
        for (u64 t = 0; t < std::min<u64>(p, 300); ++t) {
            const auto roots = roots_mod_prime(t, 2, p);
            std::vector<u64> brute;
            for (u64 x = 0; x < p; ++x)
                if (x * x % p == t) brute.push_back(x);
            ASSERT_EQ(roots, brute) << t << " mod " << p;
        }
    }
}

TEST(Roots, CrtCombinationMatchesBruteForce) {
    for (u64 q : {1u, 6u, 30u, 105u, 210u, 1155u}) {
        const auto mod = factor_modulus(q);
        for (unsigned u : {1u, 2u, 3u}) {
            for (u64 t = 0; t < q; ++t) {
                std::vector<u64> brute;
                for (u64 x = 0; x < q; ++x)
                    if (oracle::power(x, u, q) == t) brute.push_back(x);
                ASSERT_EQ(roots_mod(t, u, mod), brute) << q << " " << u << " " << t;
            }
        }
    }
}

TEST(CountBox, Examples) {
    const auto seven = factor_modulus(7);
    EXPECT_EQ(count_box({1, -2, 10, 10, seven, 1, false}), 15u);
    EXPECT_EQ(count_box({2, -1, 10, 10, seven, 1, false}), 15u);
    for (u64 a = 1; a < 7; ++a) EXPECT_EQ(count_box({1, 1, 7, 7, seven, a, false}), 7u);
    const auto q30 = factor_modulus(30);
    EXPECT_EQ(count_box({1, 1, 30, 30, q30, 7, false}), 30u);
}

TEST(CountBox, RejectsBadQueries) {
    const auto seven = factor_modulus(7);
    EXPECT_THROW(count_box({0, -2, 10, 10, seven, 1, false}), input_error);
    EXPECT_THROW(count_box({1, 0, 10, 10, seven, 1, false}), input_error);
    EXPECT_THROW(count_box({1, -2, 10, 10, factor_modulus(6), 3, false}), input_error);
    EXPECT_THROW(count_box({1, -2, 0.5, 10, seven, 1, false}), input_error);
}

TEST(CountBox, OracleEquivalence) {
    std::mt19937_64 rng(2024);
    const auto qs = squarefree_upto(300);
    const std::pair<int, int> pairs[] = {{1, -2}, {2, -1}, {1, 1}, {3, -1}, {2, 1}};
    for (int i = 0; i < 1500; ++i) {
        const u64 q = qs[rng() % qs.size()];
        const auto mod = factor_modulus(q);
        u64 a = rng() % q;
        while (std::gcd(a, q) != 1) a = rng() % q;
        const double M = 1 + static_cast<double>(rng() % 2000) / 10.0;
        const double N = 1 + static_cast<double>(rng() % 2000) / 10.0;
        const auto [u, v] = pairs[i % 5];
        ASSERT_EQ(count_box({u, v, M, N, mod, a, false}), oracle_full(u, v, M, N, q, a))
            << u << "," << v << " M=" << M << " N=" << N << " q=" << q << " a=" << a;
    }
}

TEST(CountBox, ParallelMatchesSerial) {
    const auto mod = factor_modulus(10001);
    const BoxQuery q{2, -1, 3000, 200000, mod, 17, false};
    EXPECT_EQ(count_box(q, 1), count_box(q, 4));
}

TEST(CountBox, SumRuleOverAllResidues) {
    // Σ_a #{m <= M, n <= N, (n,q)=1 : m ≡ a n^v} = floor(M)·#{n <= N : (n,q)=1}.
    for (u64 q : {7u, 30u, 77u}) {
        const auto mod = factor_modulus(q);
        const double M = 53.5, N = 41;
        u64 total = 0;
        for (u64 a = 0; a < q; ++a) total += oracle::box_count(1, -2, 0, 53, 0, 41, q, a);
        u64 units = 0;
        for (u64 n = 1; n <= 41; ++n) units += std::gcd(n, q) == 1;
        EXPECT_EQ(total, 53 * units);
        u64 unit_total = 0;
        for (u64 a = 0; a < q; ++a)
            if (std::gcd(a, q) == 1) unit_total += count_box({1, -2, M, N, mod, a, false});
        EXPECT_EQ(unit_total, total - [&] {
            u64 s = 0;
            for (u64 a = 0; a < q; ++a)
                if (std::gcd(a, q) != 1) s += oracle::box_count(1, -2, 0, 53, 0, 41, q, a);
            return s;
        }());
    }
}

TEST(CountDyadic, Examples) {
    const auto seven = factor_modulus(7);
    EXPECT_EQ(count_dyadic(5, 5, seven, 1), 3u);  // oracle over (5,10]×(5,10]
    // m ∈ (0.5, 1] = {1}; 1 ≡ 3·n̄² has no solution when 3 is a non-residue mod 7
    EXPECT_EQ(count_dyadic(0.5, 5, seven, 3), 0u);
}

TEST(CountDyadic, InclusionExclusion) {
    std::mt19937_64 rng(99);
    const auto qs = squarefree_upto(500);
    for (int i = 0; i < 300; ++i) {
        const u64 q = qs[rng() % qs.size()];
        const auto mod = factor_modulus(q);
        u64 a = rng() % q;
        while (std::gcd(a, q) != 1) a = rng() % q;
        const double M = 1 + static_cast<double>(rng() % 1000) / 7.0;
        const double N = 1 + static_cast<double>(rng() % 1000) / 7.0;
        auto full = [&](double m, double n) { return count_box({1, -2, m, n, mod, a, false}); };
        ASSERT_EQ(count_dyadic(M, N, mod, a), full(2 * M, 2 * N) - full(M, 2 * N) - full(2 * M, N) + full(M, N));
    }
}

TEST(Symmetry, Examples) {
    const auto s = check_symmetry({1, -2, 10, 10, factor_modulus(7), 1, false});
    EXPECT_EQ(s.lhs, 15u);
    EXPECT_EQ(s.rhs, 15u);
    const auto t = check_symmetry({2, -2, 17, 17, factor_modulus(11), 3, false});
    EXPECT_TRUE(t.equal());
    EXPECT_THROW(check_symmetry({1, 2, 10, 10, factor_modulus(7), 1, false}), input_error);
}

TEST(Symmetry, RandomizedBoxes) {
    std::mt19937_64 rng(123);
    const auto qs = squarefree_upto(500);
    for (int i = 0; i < 100; ++i) {
        const u64 q = qs[rng() % qs.size()];
        const auto mod = factor_modulus(q);
        u64 a = rng() % q;
        while (std::gcd(a, q) != 1) a = rng() % q;
        const double M = 1 + static_cast<double>(rng() % 5000) / 3.0;
        const double N = 1 + static_cast<double>(rng() % 5000) / 3.0;
        ASSERT_TRUE(check_symmetry({1, -2, M, N, mod, a, false}).equal());
        ASSERT_TRUE(check_symmetry({1, -2, M, N, mod, a, true}).equal());
    }
}

TEST(Bounds, ThresholdAtRootQ) {
    // M = N = √q: MN/q + min(M,N) and the Weil envelope are both of order √q.
    for (double q : {101.0, 10007.0, 1e6 + 3}) {
        const double s = std::sqrt(q);
        EXPECT_NEAR(trivial_bound(s, s, q) / s, 1 + 1 / s, 1e-12);
        EXPECT_NEAR(weil_bound(s, s, q) / s, 3 / s + 1, 1e-12);
    }
}

TEST(Bounds, InterpolationAtTwoFifteenths) {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i) {
        const double M = 1 + static_cast<double>(rng() % 100000);
        const double N = 1 + static_cast<double>(rng() % 100000);
        EXPECT_NEAR(interpolated_bound(M, N, 2.0 / 15.0) / std::pow(M * N * N, 11.0 / 36.0), 1.0, 1e-12);
        EXPECT_NEAR(interpolated_bound(M, N, 1.0), pierce_bound(M, N), 1e-9 * pierce_bound(M, N));
        EXPECT_NEAR(interpolated_bound(M, N, 0.0), pierce_bound(N, M), 1e-9 * pierce_bound(N, M));
    }
}

TEST(Bounds, ReportFieldsAndApplicability) {
    const auto mod = factor_modulus(10001);
    const BoxQuery q{1, -2, 100, 100, mod, 1, false};
    const auto rep = evaluate_bounds(q, Rational(2, 15));
    EXPECT_EQ(rep.count, count_box(q));
    EXPECT_DOUBLE_EQ(rep.trivial.value, 100.0 * 100 / 10001 + 100);
    EXPECT_TRUE(rep.pierce_MN.applicable);
    EXPECT_TRUE(rep.interpolated.applicable);
    EXPECT_DOUBLE_EQ(rep.pierce_MN.ratio, static_cast<double>(rep.count) / rep.pierce_MN.value);

    // M beyond q^{3/4} ≈ 1000.04
    const auto far = evaluate_bounds({1, -2, 2000, 100, mod, 1, false}, Rational(2, 15));
    EXPECT_FALSE(far.pierce_MN.applicable);
    EXPECT_TRUE(far.pierce_NM.applicable);
    EXPECT_FALSE(far.interpolated.applicable);

    const auto other = evaluate_bounds({1, 1, 100, 100, mod, 1, false}, Rational(1, 2));
    EXPECT_FALSE(other.pierce_MN.applicable);
    EXPECT_THROW(evaluate_bounds(q, Rational(3, 2)), input_error);
}

TEST(ScanBoxes, OrderingAndConsistency) {
    const auto mod = factor_modulus(10001);  // 73 · 137
    const auto grid = geometric_grid(10001, 0.25, 0.75, 2.0);
    const auto rows = scan_boxes(mod, 1, grid, Rational(2, 15), 2);
    ASSERT_EQ(rows.size(), grid.sides.size());
    for (std::size_t i = 1; i < rows.size(); ++i)
        ASSERT_TRUE(std::pair(rows[i - 1].query.M, rows[i - 1].query.N) < std::pair(rows[i].query.M, rows[i].query.N));
    for (const auto& r : rows) ASSERT_EQ(r.report.count, count_box(r.query));

    EXPECT_TRUE(scan_boxes(mod, 1, BoxGrid{}, Rational(2, 15)).empty());

    BoxGrid single;
    single.sides = {{50, 70}};
    const auto one = scan_boxes(mod, 1, single, Rational(2, 15));
    ASSERT_EQ(one.size(), 1u);
    const auto direct = evaluate_bounds({1, -2, 50, 70, mod, 1, false}, Rational(2, 15));
    EXPECT_EQ(one[0].report.count, direct.count);
    EXPECT_EQ(one[0].report.pierce_MN.value, direct.pierce_MN.value);
}

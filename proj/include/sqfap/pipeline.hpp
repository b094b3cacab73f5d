#pragma once

/// @file pipeline.hpp
/// @brief The error term E(X,q,a) pushed through μ² = Σ_{d²|n} μ(d), split at
/// N₀, and covered by dyadic boxes, with every stage computed exactly.
///
/// Dyadic boxes are half-open: m ∼ M means M < m <= 2M.

#include <cmath>
#include <string>
#include <vector>

#include "sqfap/arith.hpp"
#include "sqfap/congruence.hpp"
#include "sqfap/progression.hpp"
#include "sqfap/rational.hpp"

namespace sqfap {

namespace detail {

/// Calls f(n, μ(n), x = floor(X/n²), b = a·n̄² mod q) for n <= √X coprime to q
/// with μ(n) != 0.
template <class F>
void for_each_decomposition_term(u64 X, const Modulus& mod, u64 a, F&& f) {
    const u64 root = isqrt(X);
    if (root == 0) return;
    const SieveWindow mu = mobius_sieve(root);
    for (u64 n = 1; n <= root; ++n) {
        const int m = mu.mu(n);
        if (m == 0 || gcd(n % mod.q, mod.q) != 1) continue;
        const u64 b = mulmod(a, mod_pow(static_cast<i64>(n % mod.q), -2, mod.q), mod.q);
        f(n, m, X / (n * n), b);
    }
}

inline void require_decomposition_input(u64 X, const Modulus& mod, i64 a) {
    if (X < 1) throw input_error("X must be >= 1");
    require_unit(a, mod, "decomposition");
}

}  // namespace detail

/// E = Σ_{n <= √X, (n,q)=1} μ(n)·Δ(X/n², q, a·n̄²), exact.
inline Rational decompose_error(u64 X, const Modulus& mod, i64 a) {
    detail::require_decomposition_input(X, mod, a);
    const u64 r = normalize_residue(a, mod.q);
    int128 num = 0;
    detail::for_each_decomposition_term(X, mod, r, [&](u64, int mu, u64 x, u64 b) {
        const int128 term = static_cast<int128>(count_ap(x, mod.q, static_cast<i64>(b))) * mod.phi -
                            static_cast<int128>(count_coprime(x, mod));
        num += mu * term;
    });
    return Rational(num, static_cast<int128>(mod.phi));
}

struct TailSplit {
    Rational head;  ///< N₀ < n <= √X
    Rational tail;  ///< n <= N₀
};

inline void check_n0(u64 X, double N0) {
    if (!(N0 >= 1.0) || N0 > std::sqrt(static_cast<double>(X)) * (1 + 1e-12))
        throw input_error("N0 must satisfy 1 <= N0 <= X^{1/2}");
}

inline TailSplit tail_split(u64 X, const Modulus& mod, i64 a, double N0) {
    detail::require_decomposition_input(X, mod, a);
    check_n0(X, N0);
    const u64 cut = detail::floor_side(N0);
    int128 head = 0, tail = 0;
    detail::for_each_decomposition_term(X, mod, normalize_residue(a, mod.q), [&](u64 n, int mu, u64 x, u64 b) {
        const int128 term = static_cast<int128>(count_ap(x, mod.q, static_cast<i64>(b))) * mod.phi -
                            static_cast<int128>(count_coprime(x, mod));
        (n > cut ? head : tail) += mu * term;
    });
    const auto phi = static_cast<int128>(mod.phi);
    return {Rational(head, phi), Rational(tail, phi)};
}

enum class BoxConditions { cond1, cond2 };

struct DyadicBox {
    double M = 1;
    double N = 1;
    friend bool operator==(const DyadicBox&, const DyadicBox&) = default;
};

inline bool satisfies_cond1(double M, double N, u64 X, double N0) {
    const double x = static_cast<double>(X);
    return M >= 1 && N >= 1 && N >= N0 && N <= 2 * std::sqrt(x) && M * N * N <= 8 * x;
}

inline bool satisfies_cond2(double M, double N, u64 X, double M0, double N0) {
    return M >= M0 && N >= N0 && M * N * N <= 8 * static_cast<double>(X);
}

/// Dyadic anchors M = M₀·2^i (M = 2^i under cond1), N = N₀·2^j meeting the
/// chosen conditions, ordered by (M, N).
inline std::vector<DyadicBox> enumerate_boxes(u64 X, double N0, double M0, BoxConditions which = BoxConditions::cond2) {
    if (!(M0 >= 1.0) || !(N0 >= 1.0)) throw input_error("enumerate_boxes: M0 and N0 must be >= 1");
    const double x = static_cast<double>(X);
    const double m_start = which == BoxConditions::cond1 ? 1.0 : M0;
    std::vector<DyadicBox> out;
    for (double M = m_start; M * N0 * N0 <= 8 * x; M *= 2) {
        for (double N = N0; M * N * N <= 8 * x; N *= 2) {
            const bool ok = which == BoxConditions::cond1 ? satisfies_cond1(M, N, X, N0) : satisfies_cond2(M, N, X, M0, N0);
            if (ok) out.push_back({M, N});
        }
    }
    return out;
}

/// M·(N/q + 1): the count bound for boxes below the M₀ cut.
inline double small_M_estimate(double M, double N, const Modulus& mod) {
    return M * (N / static_cast<double>(mod.q) + 1.0);
}

struct ParameterChoice {
    double M0 = 1;
    double N0 = 1;
    bool clamped = false;  ///< pulled into 1 <= M0 <= X, 1 <= N0 <= X^{1/2}
};

/// M₀ = 2·max(X q^{-3/2}, 1), N₀ = 2 X^{1/2} q^{-3/8}, clamped into range.
inline ParameterChoice standard_choices(u64 X, const Modulus& mod) {
    const double x = static_cast<double>(X), q = static_cast<double>(mod.q);
    ParameterChoice c;
    c.M0 = 2.0 * std::max(x * std::pow(q, -1.5), 1.0);
    c.N0 = 2.0 * std::sqrt(x) * std::pow(q, -0.375);
    if (c.M0 > x) {
        c.M0 = std::max(1.0, x);
        c.clamped = true;
    }
    const double root = std::sqrt(x);
    if (c.N0 > root) {
        c.N0 = root;
        c.clamped = true;
    }
    if (c.N0 < 1.0) {
        c.N0 = 1.0;
        c.clamped = true;
    }
    return c;
}

struct PipelineBox {
    double M = 1;
    double N = 1;
    u64 count = 0;
    bool small_m = false;         ///< M < M₀: crude estimate regime
    bool bottom_row = false;      ///< M < 1, the (0,1] slice holding m = 1
    bool cond1 = false;
    bool cond2 = false;
    bool lemma_applicable = false;
    double bound = 0;         ///< crude estimate or min(M^{2/3}N^{1/4}, M^{1/4}N^{2/3})
    double interpolated = 0;  ///< (M^{2/3}N^{1/4})^α (M^{1/4}N^{2/3})^{1-α}
    double ratio = 0;         ///< count / bound
};

struct PipelineReport {
    u64 X = 0;
    Modulus modulus;
    u64 a = 0;
    double M0 = 1;
    double N0 = 1;
    Rational alpha;
    Rational E_direct;
    Rational E_decomposed;
    Rational head;               ///< N₀ < n <= √X part
    Rational tail_small_n;       ///< n <= N₀ part
    Rational main_term_removed;  ///< (1/φ) Σ_{n>N₀} μ(n)·#{m <= X/n², (m,q)=1}
    u64 progression_sum = 0;     ///< Σ_{n>N₀,(n,q)=1} #{m <= X/n², m ≡ a n̄²}
    std::vector<PipelineBox> boxes;
    u64 box_total = 0;
    u64 max_box_count = 0;
    Rational majorant;         ///< box_total + |tail| + |main_term_removed|
    Rational coarse_majorant;  ///< boxes·max + |tail| + |main_term_removed|
    unsigned lemma_boxes_outside_range = 0;
    double esup_rhs = 0;        ///< (log X)²·max count + M₀ + N₀ + X/(N₀ q)
    double almostthere_rhs = 0;  ///< X^{11/36} + M₀ + N₀ + X/(N₀ q)
};

/// Assembles every stage for one (X, q, a) and asserts the exact identities:
/// E_direct = E_decomposed, head + tail = E, and |E| <= majorant.
inline PipelineReport pipeline_report(u64 X, const Modulus& mod, i64 a, double M0, double N0, const Rational& alpha,
                                      unsigned workers = 1) {
    detail::require_decomposition_input(X, mod, a);
    check_n0(X, N0);
    if (!(M0 >= 1.0)) throw input_error("M0 must be >= 1");
    if (alpha < Rational(0) || alpha > Rational(1)) throw input_error("alpha must lie in [0,1]");

    PipelineReport rep;
    rep.X = X;
    rep.modulus = mod;
    rep.a = normalize_residue(a, mod.q);
    rep.M0 = M0;
    rep.N0 = N0;
    rep.alpha = alpha;
    rep.E_direct = error_term(X, mod, a).E;
    rep.E_decomposed = decompose_error(X, mod, a);
    detail::check_invariant(rep.E_direct == rep.E_decomposed, "pipeline: decomposition identity failed");

    const TailSplit split = tail_split(X, mod, a, N0);
    rep.head = split.head;
    rep.tail_small_n = split.tail;
    detail::check_invariant(split.head + split.tail == rep.E_direct, "pipeline: head + tail != E");

    const u64 cut = detail::floor_side(N0);
    int128 cross = 0;
    detail::for_each_decomposition_term(X, mod, rep.a, [&](u64 n, int mu, u64 x, u64) {
        if (n > cut) cross += mu * static_cast<int128>(count_coprime(x, mod));
    });
    rep.main_term_removed = Rational(cross, static_cast<int128>(mod.phi));

    // Sum over every coprime n in (N₀, √X], squarefree or not: boxes count those too.
    const u64 root = isqrt(X);
    for (u64 n = cut + 1; n <= root; ++n) {
        if (gcd(n % mod.q, mod.q) != 1) continue;
        const u64 b = mulmod(rep.a, mod_pow(static_cast<i64>(n % mod.q), -2, mod.q), mod.q);
        rep.progression_sum += count_ap(X / (n * n), mod.q, static_cast<i64>(b));
    }

    // Box cover of {(m, n): 1 <= m <= X/n², N₀ < n <= √X}.
    const double q = static_cast<double>(mod.q);
    double m_low = M0;
    while (m_low >= 1.0) m_low /= 2;
    for (double N = N0; detail::floor_side(N) < root; N *= 2) {
        const u64 n_min = detail::floor_side(N) + 1;
        for (double M = m_low; (detail::floor_side(M) + 1) * n_min * n_min <= X; M *= 2) {
            PipelineBox b;
            b.M = M;
            b.N = N;
            b.count = count_dyadic(M, N, mod, rep.a, workers);
            b.small_m = M < M0;
            b.bottom_row = M < 1.0;
            b.cond1 = satisfies_cond1(M, N, X, N0);
            b.cond2 = satisfies_cond2(M, N, X, M0, N0);
            detail::check_invariant(b.cond1 || b.bottom_row, "pipeline: box violates cond1");
            detail::check_invariant(b.small_m || b.cond2, "pipeline: lemma-regime box violates cond2");
            b.interpolated = interpolated_bound(M, N, alpha.to_double());
            if (b.small_m) {
                b.bound = small_M_estimate(M, N, mod);
                b.lemma_applicable = false;
            } else {
                b.bound = std::min(pierce_bound(M, N), pierce_bound(N, M));
                b.lemma_applicable = pierce_applicable(M, N, q) && pierce_applicable(N, M, q);
                if (!b.lemma_applicable) ++rep.lemma_boxes_outside_range;
            }
            b.ratio = static_cast<double>(b.count) / b.bound;
            rep.box_total += b.count;
            rep.max_box_count = std::max(rep.max_box_count, b.count);
            rep.boxes.push_back(b);
        }
    }
    detail::check_invariant(rep.progression_sum <= rep.box_total, "pipeline: boxes fail to cover the progression sum");

    const Rational slack = abs(rep.tail_small_n) + abs(rep.main_term_removed);
    rep.majorant = Rational(static_cast<int128>(rep.box_total)) + slack;
    rep.coarse_majorant =
        Rational(static_cast<int128>(rep.boxes.size()) * static_cast<int128>(rep.max_box_count)) + slack;
    detail::check_invariant(abs(rep.E_direct) <= rep.majorant, "pipeline: |E| exceeds the exact majorant");
    detail::check_invariant(abs(rep.E_direct) <= rep.coarse_majorant, "pipeline: |E| exceeds the coarse majorant");

    const double x = static_cast<double>(X);
    const double lx = std::log(x);
    const double rest = M0 + N0 + x / (N0 * q);
    rep.esup_rhs = lx * lx * static_cast<double>(rep.max_box_count) + rest;
    rep.almostthere_rhs = std::pow(x, 11.0 / 36.0) + rest;
    return rep;
}

}  // namespace sqfap

#pragma once

/// @file congruence.hpp
/// @brief Counting solutions of m^u ≡ a·n^v (mod q) in boxes, and the bound
/// envelopes those counts are compared against.
///
/// Negative v means n̄^|v|; such n must be units, the rest are skipped.
/// Counting walks the n-range only: for each n the admissible m form a
/// union of residue classes, counted by division. Square (and higher) roots
/// modulo a squarefree q come from per-prime roots glued by CRT.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sqfap/arith.hpp"
#include "sqfap/parallel.hpp"
#include "sqfap/progression.hpp"
#include "sqfap/rational.hpp"

namespace sqfap {

/// Roots of x^u ≡ t (mod p) for prime p, sorted.
inline std::vector<u64> roots_mod_prime(u64 t, unsigned u, u64 p) {
    t %= p;
    if (t == 0) return {0};
    if (u == 1) return {t};
    if (u == 2) {
        if (p == 2) return {t};
        if (mod_pow(static_cast<i64>(t), static_cast<i64>((p - 1) / 2), p) != 1) return {};
        // Tonelli–Shanks
        u64 s = 0, d = p - 1;
        while ((d & 1) == 0) {
            d >>= 1;
            ++s;
        }
        u64 z = 2;
        while (mod_pow(static_cast<i64>(z), static_cast<i64>((p - 1) / 2), p) != p - 1) ++z;
        u64 m = s;
        u64 c = mod_pow(static_cast<i64>(z), static_cast<i64>(d), p);
        u64 x = mod_pow(static_cast<i64>(t), static_cast<i64>((d + 1) / 2), p);
        u64 b = mod_pow(static_cast<i64>(t), static_cast<i64>(d), p);
        while (b != 1) {
            u64 i = 0;
            for (u64 bb = b; bb != 1; bb = mulmod(bb, bb, p)) ++i;
            u64 f = c;
            for (u64 k = 0; k + 1 < m - i; ++k) f = mulmod(f, f, p);
            x = mulmod(x, f, p);
            c = mulmod(f, f, p);
            b = mulmod(b, c, p);
            m = i;
        }
        u64 y = p - x;
        return x < y ? std::vector<u64>{x, y} : std::vector<u64>{y, x};
    }
    constexpr u64 kExhaustiveLimit = u64{1} << 20;
    if (p > kExhaustiveLimit)
        throw input_error("roots_mod_prime: exponent " + std::to_string(u) + " unsupported for prime " + std::to_string(p));
    std::vector<u64> out;
    for (u64 x = 1; x < p; ++x)
        if (mod_pow(static_cast<i64>(x), u, p) == t) out.push_back(x);
    return out;
}

/// All x in [0, q) with x^u ≡ t (mod q), q squarefree.
inline std::vector<u64> roots_mod(u64 t, unsigned u, const Modulus& mod) {
    std::vector<u64> acc{0};
    u64 Q = 1;
    for (u64 p : mod.prime_factors) {
        const auto local = roots_mod_prime(t % p, u, p);
        if (local.empty()) return {};
        const u64 q_inv = mod_inverse(static_cast<i64>(Q % p), p);
        std::vector<u64> next;
        next.reserve(acc.size() * local.size());
        for (u64 r : acc)
            for (u64 s : local) {
                const u64 diff = (s + p - r % p) % p;
                next.push_back(r + Q * mulmod(diff, q_inv, p));
            }
        acc = std::move(next);
        Q *= p;
    }
    std::sort(acc.begin(), acc.end());
    return acc;
}

struct BoxQuery {
    int u = 1;
    int v = -2;
    double M = 1;
    double N = 1;
    Modulus modulus;
    u64 a = 1;
    /// false: [1,M]×[1,N]; true: (M,2M]×(N,2N].
    bool dyadic = false;
};

namespace detail {

struct IntRange {
    u64 lo_excl = 0;  ///< range is (lo_excl, hi]
    u64 hi = 0;
};

inline u64 floor_side(double x) { return x <= 0 ? 0 : static_cast<u64>(std::floor(x)); }

inline IntRange side_range(double side, bool dyadic) {
    if (dyadic) return {floor_side(side), floor_side(2.0 * side)};
    return {0, floor_side(side)};
}

inline void validate(const BoxQuery& q) {
    if (q.u <= 0) throw input_error("box query: u must be positive");
    if (q.v == 0) throw input_error("box query: v must be nonzero");
    const double lo = q.dyadic ? 0.5 : 1.0;
    if (!(q.M >= lo) || !(q.N >= lo)) throw input_error("box query: M and N must be >= 1 (>= 1/2 for dyadic boxes)");
    if (q.M > 1e15 || q.N > 1e15) throw input_error("box query: side too large");
    if (!is_unit(static_cast<i64>(q.a), q.modulus.q)) throw input_error("box query: a not coprime to q");
}

}  // namespace detail

/// Exact S_{u,v}(M,N,q,a) (or its dyadic variant).
inline u64 count_box(const BoxQuery& query, unsigned workers = 1) {
    detail::validate(query);
    const Modulus& mod = query.modulus;
    const u64 q = mod.q;
    const u64 a = normalize_residue(static_cast<i64>(query.a), q);
    const auto mr = detail::side_range(query.M, query.dyadic);
    const auto nr = detail::side_range(query.N, query.dyadic);
    auto count_m = [&](u64 r) { return count_ap(mr.hi, q, static_cast<i64>(r)) - count_ap(mr.lo_excl, q, static_cast<i64>(r)); };

    const u64 total = detail::parallel_sum(nr.lo_excl + 1, nr.hi, workers, [&](u64 n) -> u64 {
        if (query.v < 0 && gcd(n % q, q) != 1) return 0;
        const u64 t = mulmod(a, mod_pow(static_cast<i64>(n % q), query.v, q), q);
        if (query.u == 1) return count_m(t);
        u64 s = 0;
        for (u64 r : roots_mod(t, static_cast<unsigned>(query.u), mod)) s += count_m(r);
        return s;
    });

    if (!query.dyadic) {
        const u64 fm = mr.hi, fn = nr.hi;
        if (query.u == 1 && query.v == -2)
            detail::check_invariant(total <= (fm / q + 1) * fn, "count_box: S_{1,-2} exceeds (floor(M/q)+1)floor(N)");
        if (query.u == 2 && query.v == -1)
            detail::check_invariant(total <= (u64{1} << mod.omega) * (fn / q + 1) * fm,
                                    "count_box: S_{2,-1} exceeds 2^omega (floor(N/q)+1) floor(M)");
    }
    return total;
}

/// S(M,N,q,a): pairs M < m <= 2M, N < n <= 2N with m·n² ≡ a (mod q).
inline u64 count_dyadic(double M, double N, const Modulus& mod, u64 a, unsigned workers = 1) {
    return count_box(BoxQuery{1, -2, M, N, mod, a, true}, workers);
}

struct SymmetryCheck {
    u64 lhs = 0;  ///< S_{u,v}(M,N)
    u64 rhs = 0;  ///< S_{-v,-u}(N,M)
    bool equal() const { return lhs == rhs; }
};

/// Evaluates both sides of S_{u,v}(M,N,q,a) = S_{-v,-u}(N,M,q,a).
inline SymmetryCheck check_symmetry(const BoxQuery& query, unsigned workers = 1) {
    if (query.v >= 0) throw input_error("check_symmetry: v must be negative so that -v is a valid u");
    BoxQuery mirrored = query;
    mirrored.u = -query.v;
    mirrored.v = -query.u;
    std::swap(mirrored.M, mirrored.N);
    return {count_box(query, workers), count_box(mirrored, workers)};
}

// Bound envelopes, implied constants set to 1 and q^ε dropped.

inline double trivial_bound(double M, double N, double q) { return M * N / q + std::min(M, N); }

inline double weil_bound(double M, double N, double q) {
    const double rq = std::sqrt(q);
    return M * N / q + M / rq + N / rq + rq;
}

/// M^{2/3} N^{1/4}.
inline double pierce_bound(double M, double N) { return std::pow(M, 2.0 / 3.0) * std::pow(N, 0.25); }

/// (M^{2/3}N^{1/4})^α (M^{1/4}N^{2/3})^{1-α}.
inline double interpolated_bound(double M, double N, double alpha) {
    return std::pow(pierce_bound(M, N), alpha) * std::pow(pierce_bound(N, M), 1.0 - alpha);
}

/// Whether the M^{2/3}N^{1/4} envelope is in its stated range for this box.
inline bool pierce_applicable(double M, double N, double q) {
    return M >= 1 && M <= std::pow(q, 0.75) && N >= 1 && N < q / 2;
}

struct BoundValue {
    double value = 0;
    bool applicable = true;
    double ratio = 0;  ///< count / value
};

struct BoundReport {
    u64 count = 0;
    BoundValue trivial;
    BoundValue weil;
    BoundValue pierce_MN;  ///< M^{2/3}N^{1/4}
    BoundValue pierce_NM;  ///< M^{1/4}N^{2/3}
    BoundValue interpolated;
    Rational alpha;
};

inline BoundReport evaluate_bounds(const BoxQuery& query, u64 count, const Rational& alpha) {
    if (alpha < Rational(0) || alpha > Rational(1)) throw input_error("evaluate_bounds: alpha must lie in [0,1]");
    const double M = query.M, N = query.N, q = static_cast<double>(query.modulus.q);
    const double al = alpha.to_double();
    const bool pierce_pair = (query.u == 1 && query.v == -2) || (query.u == 2 && query.v == -1);
    auto make = [count](double value, bool applicable) {
        return BoundValue{value, applicable, static_cast<double>(count) / value};
    };
    BoundReport r;
    r.count = count;
    r.alpha = alpha;
    r.trivial = make(trivial_bound(M, N, q), true);
    r.weil = make(weil_bound(M, N, q), true);
    const bool mn = pierce_pair && pierce_applicable(M, N, q);
    const bool nm = pierce_pair && pierce_applicable(N, M, q);
    r.pierce_MN = make(pierce_bound(M, N), mn);
    r.pierce_NM = make(pierce_bound(N, M), nm);
    r.interpolated = make(interpolated_bound(M, N, al), mn && nm);
    return r;
}

inline BoundReport evaluate_bounds(const BoxQuery& query, const Rational& alpha, unsigned workers = 1) {
    return evaluate_bounds(query, count_box(query, workers), alpha);
}

struct BoxGrid {
    int u = 1;
    int v = -2;
    bool dyadic = false;
    std::vector<std::pair<double, double>> sides;  ///< (M, N) pairs
};

/// Sides q^{lo}·ratio^k up to q^{hi}, as every (M, N) combination.
inline BoxGrid geometric_grid(u64 q, double lo_exp, double hi_exp, double ratio) {
    if (!(ratio > 1.0)) throw input_error("geometric_grid: ratio must exceed 1");
    std::vector<double> sides;
    const double hi = std::pow(static_cast<double>(q), hi_exp);
    for (double s = std::max(1.0, std::pow(static_cast<double>(q), lo_exp)); s <= hi * (1 + 1e-12); s *= ratio) sides.push_back(s);
    BoxGrid g;
    for (double m : sides)
        for (double n : sides) g.sides.emplace_back(m, n);
    return g;
}

struct ScanRow {
    BoxQuery query;
    BoundReport report;
};

/// One report row per box, ordered by (M, N).
inline std::vector<ScanRow> scan_boxes(const Modulus& mod, u64 a, BoxGrid grid, const Rational& alpha, unsigned workers = 1) {
    std::sort(grid.sides.begin(), grid.sides.end());
    std::vector<ScanRow> rows(grid.sides.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        rows[i].query = BoxQuery{grid.u, grid.v, grid.sides[i].first, grid.sides[i].second, mod, a, grid.dyadic};
    for (const auto& r : rows) detail::validate(r.query);
    detail::parallel_for(rows.size(), workers, [&](std::size_t i) { rows[i].report = evaluate_bounds(rows[i].query, alpha); });
    return rows;
}

}  // namespace sqfap

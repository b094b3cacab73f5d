#pragma once

/// @file progression.hpp
/// @brief Exact counts of integers and squarefree integers in residue
/// classes, the discrepancy Δ(x,q,a), the error term E(X,q,a), and the
/// least squarefree member of a class.
///
/// Real cutoffs only matter through their floor, so the integer overloads
/// are the primary ones; floor(X/n²) = floor(floor(X)/n²) keeps everything
/// exact.

#include <cmath>
#include <cstdint>
#include <vector>

#include "sqfap/arith.hpp"
#include "sqfap/rational.hpp"

namespace sqfap {

/// #{1 <= m <= x : m ≡ a (mod q)}.
inline u64 count_ap(u64 x, u64 q, i64 a) {
    if (q == 0) throw input_error("count_ap: modulus must be positive");
    u64 r = normalize_residue(a, q);
    if (r == 0) return x / q;
    return x >= r ? (x - r) / q + 1 : 0;
}

inline u64 count_ap(double x, u64 q, i64 a) {
    return x < 1.0 ? 0 : count_ap(static_cast<u64>(std::floor(x)), q, a);
}

/// #{1 <= m <= x : gcd(m, q) = 1} via Σ_{d|q} μ(d)·floor(x/d).
inline u64 count_coprime(u64 x, const Modulus& mod) {
    i64 total = 0;
    for (auto [d, s] : signed_divisors(mod)) total += s * static_cast<i64>(x / d);
    return static_cast<u64>(total);
}

inline u64 count_coprime(double x, const Modulus& mod) {
    return x < 1.0 ? 0 : count_coprime(static_cast<u64>(std::floor(x)), mod);
}

/// Δ(x,q,a) = count_ap − count_coprime/φ(q), exact.
inline Rational delta(u64 x, const Modulus& mod, i64 a) {
    return Rational(static_cast<int128>(count_ap(x, mod.q, a)) * mod.phi - static_cast<int128>(count_coprime(x, mod)),
                    static_cast<int128>(mod.phi));
}

struct ErrorTermResult {
    u64 X = 0;
    Modulus modulus;
    u64 a = 0;
    u64 progression_count = 0;  ///< squarefree n <= X, n ≡ a
    u64 coprime_count = 0;      ///< squarefree n <= X, gcd(n,q) = 1
    Rational E;
};

namespace detail {

inline void require_unit(i64 a, const Modulus& mod, const char* who) {
    if (!is_unit(a, mod.q))
        throw input_error(std::string(who) + ": residue " + std::to_string(a) + " not coprime to q=" + std::to_string(mod.q));
}

inline constexpr u64 kSegment = u64{1} << 18;

/// Calls f(n) for every squarefree n in [1, X], window by window.
template <class F>
void for_each_squarefree(u64 X, F&& f) {
    if (X == 0) return;
    const PrimeTable table = primes_up_to(isqrt(X) + 1);
    for (u64 lo = 1; lo <= X; lo += kSegment) {
        const u64 len = std::min(kSegment, X - lo + 1);
        const auto flags = squarefree_segment(lo, len, table);
        for (u64 i = 0; i < len; ++i)
            if (flags[i]) f(lo + i);
    }
}

}  // namespace detail

/// Squarefree counts for one modulus, indexed by residue class.
struct ClassCounts {
    std::vector<u64> by_residue;  ///< squarefree n <= X with n mod q = r
    u64 coprime = 0;              ///< sum over unit residues
};

/// One pass over squarefree n <= X tallying residues mod q. `window` may be
/// any SieveWindow starting at 1 that covers [1, X].
inline ClassCounts class_counts(const SieveWindow& window, u64 X, const Modulus& mod) {
    if (X > 0 && (window.start() != 1 || window.end() <= X)) throw input_error("class_counts: window does not cover [1, X]");
    ClassCounts c;
    c.by_residue.assign(mod.q, 0);
    const auto mu = window.values();
    u64 r = 1 % mod.q;
    for (u64 n = 1; n <= X; ++n) {
        if (mu[n - 1] != 0) ++c.by_residue[r];
        if (++r == mod.q) r = 0;
    }
    for (u64 res = 0; res < mod.q; ++res)
        if (gcd(res, mod.q) == 1) c.coprime += c.by_residue[res];
    return c;
}

/// #{n <= X squarefree, n ≡ a (mod q)}. a must be a unit.
inline u64 sqfree_count_ap(u64 X, const Modulus& mod, i64 a) {
    detail::require_unit(a, mod, "sqfree_count_ap");
    const u64 r = normalize_residue(a, mod.q);
    u64 count = 0;
    detail::for_each_squarefree(X, [&](u64 n) { count += (n % mod.q == r); });
    return count;
}

/// #{n <= X squarefree, gcd(n, q) = 1}.
inline u64 sqfree_count_coprime(u64 X, const Modulus& mod) {
    u64 count = 0;
    detail::for_each_squarefree(X, [&](u64 n) { count += (gcd(n, mod.q) == 1); });
    return count;
}

namespace detail {

inline ErrorTermResult make_error_term(u64 X, const Modulus& mod, u64 a, u64 ap, u64 cop) {
    ErrorTermResult res;
    res.X = X;
    res.modulus = mod;
    res.a = a;
    res.progression_count = ap;
    res.coprime_count = cop;
    res.E = Rational(static_cast<int128>(ap) * mod.phi - static_cast<int128>(cop), static_cast<int128>(mod.phi));
    check_invariant(ap <= X / mod.q + 1 && cop <= X, "error_term: count envelope violated");
    return res;
}

}  // namespace detail

/// E(X,q,a) by direct sieving.
inline ErrorTermResult error_term(u64 X, const Modulus& mod, i64 a) {
    if (X < 1) throw input_error("error_term: X must be >= 1");
    detail::require_unit(a, mod, "error_term");
    const u64 r = normalize_residue(a, mod.q);
    u64 ap = 0, cop = 0;
    detail::for_each_squarefree(X, [&](u64 n) {
        ap += (n % mod.q == r);
        cop += (gcd(n, mod.q) == 1);
    });
    return detail::make_error_term(X, mod, r, ap, cop);
}

/// E(X,q,a) from precomputed class counts, for grid scans.
inline ErrorTermResult error_term(const ClassCounts& counts, u64 X, const Modulus& mod, i64 a) {
    detail::require_unit(a, mod, "error_term");
    const u64 r = normalize_residue(a, mod.q);
    return detail::make_error_term(X, mod, r, counts.by_residue.at(r), counts.coprime);
}

/// |E| / (X^{1/2} q^{-1/2} + q^{1/2}).
inline double reference_ratio(const ErrorTermResult& e) {
    const double X = static_cast<double>(e.X);
    const double q = static_cast<double>(e.modulus.q);
    return std::fabs(e.E.to_double()) / (std::sqrt(X / q) + std::sqrt(q));
}

inline double reference_ratio(u64 X, const Modulus& mod, i64 a) { return reference_ratio(error_term(X, mod, a)); }

/// Least positive squarefree n ≡ a (mod q). The scan stops at `ceiling`
/// (default q², at least 64) and throws if nothing is found.
inline u64 least_squarefree(const Modulus& mod, i64 a, u64 ceiling = 0) {
    detail::require_unit(a, mod, "least_squarefree");
    if (ceiling == 0) ceiling = std::max<u64>(64, mod.q * mod.q);
    u64 n = normalize_residue(a, mod.q);
    if (n == 0) n = mod.q;
    for (; n <= ceiling; n += mod.q)
        if (is_squarefree(n)) return n;
    throw invariant_error("least_squarefree: scan ceiling " + std::to_string(ceiling) + " exceeded for q=" +
                          std::to_string(mod.q));
}

/// n(q,a) for every residue class at once; zero entries mark non-units.
/// Sweeps a global squarefree window first and falls back to per-class scans.
inline std::vector<u64> least_squarefree_all(const Modulus& mod, const SieveWindow& window) {
    if (window.start() != 1) throw input_error("least_squarefree_all: window must start at 1");
    std::vector<u64> least(mod.q, 0);
    u64 missing = mod.phi;
    for (u64 n = window.start(); n < window.end() && missing > 0; ++n) {
        if (!window.is_squarefree(n)) continue;
        const u64 r = n % mod.q;
        if (least[r] == 0 && gcd(r, mod.q) == 1) {
            least[r] = n;
            --missing;
        }
    }
    if (missing > 0) {
        for (u64 r = 0; r < mod.q; ++r)
            if (least[r] == 0 && gcd(r, mod.q) == 1) least[r] = least_squarefree(mod, static_cast<i64>(r));
    }
    return least;
}

}  // namespace sqfap

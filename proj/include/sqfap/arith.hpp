#pragma once

/// @file arith.hpp
/// @brief Integer primitives: Möbius sieves (full and windowed), prime
/// tables, squarefree moduli, modular inverse and power.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "sqfap/error.hpp"

namespace sqfap {

using u64 = std::uint64_t;
using i64 = std::int64_t;

/// Largest limit accepted by mobius_sieve; larger ranges must use windows.
inline constexpr u64 kMaxFullSieve = u64{1} << 28;

inline u64 isqrt(u64 n) {
    auto r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

inline u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m);
}

/// Reduce any signed value into [0, q).
inline u64 normalize_residue(i64 a, u64 q) {
    auto qq = static_cast<__int128>(q);
    auto r = static_cast<__int128>(a) % qq;
    if (r < 0) r += qq;
    return static_cast<u64>(r);
}

/// Möbius values over the integer interval [start, start + size()).
class SieveWindow {
public:
    SieveWindow() = default;
    SieveWindow(u64 start, std::vector<std::int8_t> mu) : start_(start), mu_(std::move(mu)) {}

    u64 start() const { return start_; }
    u64 length() const { return mu_.size(); }
    /// One past the last integer covered.
    u64 end() const { return start_ + mu_.size(); }
    bool contains(u64 n) const { return n >= start_ && n < end(); }

    int mu(u64 n) const { return mu_[n - start_]; }
    bool is_squarefree(u64 n) const { return mu_[n - start_] != 0; }
    std::span<const std::int8_t> values() const { return mu_; }

    friend bool operator==(const SieveWindow&, const SieveWindow&) = default;

private:
    u64 start_ = 1;
    std::vector<std::int8_t> mu_;
};

/// All primes <= limit. The limit is part of the type so a window sieve can
/// tell whether the table is complete for its range.
struct PrimeTable {
    u64 limit = 1;
    std::vector<u64> primes;

    bool covers(u64 n) const { return limit >= isqrt(n); }
};

inline PrimeTable primes_up_to(u64 limit) {
    PrimeTable t;
    t.limit = limit;
    if (limit < 2) return t;
    std::vector<bool> composite(limit + 1, false);
    for (u64 p = 2; p <= limit; ++p) {
        if (composite[p]) continue;
        t.primes.push_back(p);
        for (u64 k = p * p; k <= limit; k += p) composite[k] = true;
    }
    return t;
}

/// μ(n) for 1 <= n <= limit. Linear sieve.
inline SieveWindow mobius_sieve(u64 limit) {
    if (limit < 1) throw input_error("mobius_sieve: limit must be >= 1");
    if (limit > kMaxFullSieve) throw input_error("mobius_sieve: limit exceeds full-sieve maximum; use mobius_segment");
    std::vector<std::int8_t> mu(limit + 1, 0);
    std::vector<std::uint32_t> primes;
    std::vector<bool> composite(limit + 1, false);
    mu[1] = 1;
    for (u64 i = 2; i <= limit; ++i) {
        if (!composite[i]) {
            primes.push_back(static_cast<std::uint32_t>(i));
            mu[i] = -1;
        }
        for (auto p : primes) {
            u64 ip = i * p;
            if (ip > limit) break;
            composite[ip] = true;
            if (i % p == 0) {
                mu[ip] = 0;
                break;
            }
            mu[ip] = static_cast<std::int8_t>(-mu[i]);
        }
    }
    mu.erase(mu.begin());
    return SieveWindow(1, std::move(mu));
}

/// μ over [start, start + length) using a prime table that must reach
/// sqrt(start + length - 1).
inline SieveWindow mobius_segment(u64 start, u64 length, const PrimeTable& table) {
    if (start < 1) throw input_error("mobius_segment: start must be >= 1");
    if (length == 0) return SieveWindow(start, {});
    const u64 last = start + length - 1;
    if (!table.covers(last))
        throw input_error("mobius_segment: prime table limit " + std::to_string(table.limit) +
                          " does not reach sqrt(" + std::to_string(last) + ")");
    std::vector<std::int8_t> mu(length, 1);
    std::vector<u64> rem(length);
    std::iota(rem.begin(), rem.end(), start);
    for (u64 p : table.primes) {
        if (p * p > last) break;
        for (u64 k = (start + p - 1) / p * p; k <= last; k += p) {
            mu[k - start] = static_cast<std::int8_t>(-mu[k - start]);
            rem[k - start] /= p;
        }
        const u64 pp = p * p;
        for (u64 k = (start + pp - 1) / pp * pp; k <= last; k += pp) mu[k - start] = 0;
    }
    for (u64 i = 0; i < length; ++i) {
        if (rem[i] > 1 && mu[i] != 0) mu[i] = static_cast<std::int8_t>(-mu[i]);
    }
    return SieveWindow(start, std::move(mu));
}

/// Squarefree flags over [start, start + length); cheaper than full μ.
inline std::vector<std::uint8_t> squarefree_segment(u64 start, u64 length, const PrimeTable& table) {
    std::vector<std::uint8_t> flags(length, 1);
    if (length == 0) return flags;
    const u64 last = start + length - 1;
    if (!table.covers(last)) throw input_error("squarefree_segment: prime table too small");
    for (u64 p : table.primes) {
        const u64 pp = p * p;
        if (pp > last) break;
        for (u64 k = (start + pp - 1) / pp * pp; k <= last; k += pp) flags[k - start] = 0;
    }
    return flags;
}

/// Trial-division squarefree test, for isolated values.
inline bool is_squarefree(u64 n) {
    if (n == 0) return false;
    for (u64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return false;
        }
    }
    return true;
}

/// A squarefree modulus together with its factorization.
struct Modulus {
    u64 q = 1;
    std::vector<u64> prime_factors;
    u64 phi = 1;
    unsigned omega = 0;

    friend bool operator==(const Modulus&, const Modulus&) = default;
};

/// Factors q by trial division; rejects non-squarefree q.
inline Modulus factor_modulus(u64 q) {
    if (q < 1) throw input_error("modulus must be >= 1");
    Modulus m;
    m.q = q;
    u64 rest = q;
    for (u64 p = 2; p * p <= rest; p += (p == 2 ? 1 : 2)) {
        if (rest % p != 0) continue;
        rest /= p;
        if (rest % p == 0) throw input_error("modulus not squarefree: " + std::to_string(q));
        m.prime_factors.push_back(p);
    }
    if (rest > 1) m.prime_factors.push_back(rest);
    for (u64 p : m.prime_factors) m.phi *= p - 1;
    m.omega = static_cast<unsigned>(m.prime_factors.size());
    return m;
}

inline u64 gcd(u64 a, u64 b) { return std::gcd(a, b); }

inline bool is_unit(i64 a, u64 q) { return gcd(normalize_residue(a, q), q) == 1; }

/// n̄ with n·n̄ ≡ 1 (mod q), in [0, q).
inline u64 mod_inverse(i64 n, u64 q) {
    if (q == 0) throw input_error("mod_inverse: modulus must be positive");
    u64 a = normalize_residue(n, q);
    if (gcd(a, q) != 1) throw input_error("mod_inverse: " + std::to_string(n) + " not invertible mod " + std::to_string(q));
    if (q == 1) return 0;
    __int128 old_r = a, r = q, old_s = 1, s = 0;
    while (r != 0) {
        __int128 t = old_r / r;
        __int128 tmp = old_r - t * r;
        old_r = r;
        r = tmp;
        tmp = old_s - t * s;
        old_s = s;
        s = tmp;
    }
    __int128 inv = old_s % static_cast<__int128>(q);
    if (inv < 0) inv += q;
    return static_cast<u64>(inv);
}

/// n^e mod q; a negative exponent means n̄^|e|.
inline u64 mod_pow(i64 n, i64 e, u64 q) {
    if (q == 0) throw input_error("mod_pow: modulus must be positive");
    u64 base = e < 0 ? mod_inverse(n, q) : normalize_residue(n, q);
    u64 k = e < 0 ? static_cast<u64>(-(e + 1)) + 1 : static_cast<u64>(e);
    u64 result = 1 % q;
    while (k > 0) {
        if (k & 1) result = mulmod(result, base, q);
        base = mulmod(base, base, q);
        k >>= 1;
    }
    return result;
}

/// Squarefree divisors d of q with μ(d), generated from the factorization.
inline std::vector<std::pair<u64, int>> signed_divisors(const Modulus& m) {
    std::vector<std::pair<u64, int>> out{{1, 1}};
    for (u64 p : m.prime_factors) {
        const auto n = out.size();
        for (std::size_t i = 0; i < n; ++i) out.emplace_back(out[i].first * p, -out[i].second);
    }
    return out;
}

}  // namespace sqfap

#pragma once

// Brute-force reference implementations. Deliberately naive and independent
// of the library's algorithms: per-integer trial division, double loops over
// boxes, inverses by search.

#include <cstdint>
#include <numeric>

#include "sqfap/rational.hpp"

namespace oracle {

using u64 = std::uint64_t;

inline int mu(u64 n) {
    int r = 1;
    for (u64 p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        r = -r;
    }
    if (n > 1) r = -r;
    return r;
}

inline u64 phi(u64 q) {
    u64 c = 0;
    for (u64 k = 1; k <= q; ++k) c += std::gcd(k, q) == 1;
    return c;
}

inline u64 inverse(u64 n, u64 q) {
    for (u64 k = 0; k < q; ++k)
        if ((n % q) * k % q == 1 % q) return k;
    return q;  // not invertible
}

inline u64 power(u64 b, unsigned e, u64 q) {
    u64 r = 1 % q;
    for (unsigned i = 0; i < e; ++i) r = r * (b % q) % q;
    return r;
}

/// E(X,q,a) by scanning every n <= X.
inline sqfap::Rational error_term(u64 X, u64 q, u64 a) {
    long long ap = 0, cop = 0;
    for (u64 n = 1; n <= X; ++n) {
        if (mu(n) == 0) continue;
        ap += n % q == a % q;
        cop += std::gcd(n, q) == 1;
    }
    return sqfap::Rational(static_cast<sqfap::int128>(ap)) - sqfap::Rational(cop, static_cast<long long>(phi(q)));
}

/// #{m in mrange, n in nrange : m^u ≡ a n^v}, n restricted to units if v < 0.
inline u64 box_count(int u, int v, u64 m_lo_excl, u64 m_hi, u64 n_lo_excl, u64 n_hi, u64 q, u64 a) {
    u64 c = 0;
    for (u64 n = n_lo_excl + 1; n <= n_hi; ++n) {
        u64 base = n % q;
        if (v < 0) {
            if (std::gcd(n, q) != 1) continue;
            base = inverse(n, q);
        }
        const u64 rhs = a % q * power(base, static_cast<unsigned>(v < 0 ? -v : v), q) % q;
        for (u64 m = m_lo_excl + 1; m <= m_hi; ++m)
            if (power(m, static_cast<unsigned>(u), q) == rhs) ++c;
    }
    return c;
}

}  // namespace oracle

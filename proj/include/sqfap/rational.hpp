#pragma once

/// @file rational.hpp
/// @brief Exact rationals over a checked 128-bit integer.
///
/// Counts at X <= 10^12 times phi(q) stay far below 2^127, so a widened
/// integer with overflow detection is enough; anything beyond throws.

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sqfap/error.hpp"

namespace sqfap {

using int128 = __int128;

namespace detail {

inline int128 abs128(int128 v) { return v < 0 ? -v : v; }

inline int128 gcd128(int128 a, int128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline int128 checked_mul(int128 a, int128 b) {
    int128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("rational: 128-bit overflow in multiply");
    return r;
}

inline int128 checked_add(int128 a, int128 b) {
    int128 r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("rational: 128-bit overflow in add");
    return r;
}

inline std::string to_string128(int128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    // magnitude via unsigned to survive INT128_MIN
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
    std::string s;
    while (u != 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    return {s.rbegin(), s.rend()};
}

inline int128 parse_int128(std::string_view s) {
    if (s.empty()) throw input_error("empty integer literal");
    bool neg = false;
    std::size_t i = 0;
    if (s[0] == '-' || s[0] == '+') {
        neg = s[0] == '-';
        i = 1;
    }
    if (i == s.size()) throw input_error("bad integer literal: " + std::string(s));
    int128 v = 0;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c < '0' || c > '9') throw input_error("bad integer literal: " + std::string(s));
        v = checked_add(checked_mul(v, 10), c - '0');
    }
    return neg ? -v : v;
}

}  // namespace detail

/// Normalized fraction num/den with den > 0 and gcd(num, den) = 1.
class Rational {
public:
    constexpr Rational() = default;
    Rational(int128 num) : num_(num), den_(1) {}  // NOLINT: implicit from integers is intended
    Rational(int128 num, int128 den) : num_(num), den_(den) {
        if (den_ == 0) throw std::domain_error("rational: zero denominator");
        normalize();
    }
    // Disambiguate plain integer literals.
    Rational(int num) : Rational(static_cast<int128>(num)) {}  // NOLINT
    Rational(long num) : Rational(static_cast<int128>(num)) {}  // NOLINT
    Rational(long long num) : Rational(static_cast<int128>(num)) {}  // NOLINT
    Rational(unsigned long num) : Rational(static_cast<int128>(num)) {}  // NOLINT
    Rational(unsigned long long num) : Rational(static_cast<int128>(num)) {}  // NOLINT

    int128 num() const { return num_; }
    int128 den() const { return den_; }

    bool is_integer() const { return den_ == 1; }
    int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    long double to_long_double() const {
        return static_cast<long double>(num_) / static_cast<long double>(den_);
    }

    /// "p/q" with q >= 1, always including the denominator.
    std::string str() const { return detail::to_string128(num_) + "/" + detail::to_string128(den_); }

    /// Accepts "p", "p/q", with optional sign on p.
    static Rational parse(std::string_view s) {
        auto slash = s.find('/');
        if (slash == std::string_view::npos) return Rational(detail::parse_int128(s));
        return Rational(detail::parse_int128(s.substr(0, slash)), detail::parse_int128(s.substr(slash + 1)));
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        if (a.den_ == b.den_) return Rational(detail::checked_add(a.num_, b.num_), a.den_);
        int128 g = detail::gcd128(a.den_, b.den_);
        int128 l = detail::checked_mul(a.den_ / g, b.den_);
        int128 n = detail::checked_add(detail::checked_mul(a.num_, b.den_ / g), detail::checked_mul(b.num_, a.den_ / g));
        return Rational(n, l);
    }
    friend Rational operator-(const Rational& a) {
        Rational r;
        r.num_ = -a.num_;
        r.den_ = a.den_;
        return r;
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        int128 g1 = detail::gcd128(a.num_, b.den_);
        int128 g2 = detail::gcd128(b.num_, a.den_);
        if (g1 == 0) g1 = 1;
        if (g2 == 0) g2 = 1;
        return Rational(detail::checked_mul(a.num_ / g1, b.num_ / g2), detail::checked_mul(a.den_ / g2, b.den_ / g1));
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("rational: division by zero");
        return a * Rational(b.den_, b.num_);
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        int128 l = detail::checked_mul(a.num_, b.den_);
        int128 r = detail::checked_mul(b.num_, a.den_);
        return l < r ? std::strong_ordering::less : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        int128 g = detail::gcd128(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    int128 num_ = 0;
    int128 den_ = 1;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }
inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace sqfap

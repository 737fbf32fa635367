// rational.hpp — exact rational arithmetic for the interval constructions.
//
// Every endpoint produced by the cutting-and-stacking procedure is of the
// form num / 3^e; quadrature grids add a factor 2 in the denominator.  A
// reduced int64 fraction with __int128 intermediates covers both exactly.

#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "weakmix/errors.hpp"

namespace weakmix {

struct Rat {
    long long num = 0;
    long long den = 1; // > 0, gcd(num, den) == 1

    Rat() = default;
    Rat(long long n) : num(n), den(1) {}
    Rat(long long n, long long d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) raise(Errc::numeric_overflow, "Rat: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool is_zero() const { return num == 0; }

    friend Rat operator+(const Rat& a, const Rat& b) { return combine(a, b, +1); }
    friend Rat operator-(const Rat& a, const Rat& b) { return combine(a, b, -1); }
    friend Rat operator-(const Rat& a) { Rat r; r.num = -a.num; r.den = a.den; return r; }

    friend Rat operator*(const Rat& a, const Rat& b) {
        __int128 n = static_cast<__int128>(a.num) * b.num;
        __int128 d = static_cast<__int128>(a.den) * b.den;
        return from_i128(n, d);
    }

    friend bool operator==(const Rat& a, const Rat& b) { return a.num == b.num && a.den == b.den; }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

    std::string str() const {
        return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    }

  private:
    static Rat combine(const Rat& a, const Rat& b, int sign) {
        __int128 n = static_cast<__int128>(a.num) * b.den +
                     static_cast<__int128>(sign) * static_cast<__int128>(b.num) * a.den;
        __int128 d = static_cast<__int128>(a.den) * b.den;
        return from_i128(n, d);
    }

    static Rat from_i128(__int128 n, __int128 d) {
        if (d < 0) { n = -n; d = -d; }
        __int128 an = n < 0 ? -n : n;
        __int128 g = gcd128(an, d);
        if (g > 1) { n /= g; d /= g; }
        constexpr __int128 lim = 0x7fffffffffffffffLL;
        if (n > lim || n < -lim || d > lim)
            raise(Errc::numeric_overflow, "Rat: value exceeds 64-bit range");
        Rat r;
        r.num = static_cast<long long>(n);
        r.den = static_cast<long long>(d);
        return r;
    }

    static __int128 gcd128(__int128 a, __int128 b) {
        while (b) { __int128 t = a % b; a = b; b = t; }
        return a;
    }
};

// 3^e as long long; e <= 39 fits.
inline long long pow3(int e) {
    if (e < 0 || e > 39) raise(Errc::numeric_overflow, "pow3: exponent out of range");
    long long r = 1;
    for (int i = 0; i < e; ++i) r *= 3;
    return r;
}

// num / 3^e
inline Rat triadic(long long num, int e) { return Rat(num, pow3(e)); }

// True if den == 2^a * 3^e with a in {0,1}; used by the serializers.
inline bool is_triadic(const Rat& r, long long* num3 = nullptr, int* exp3 = nullptr) {
    long long d = r.den;
    int e = 0;
    while (d % 3 == 0) { d /= 3; ++e; }
    if (d != 1) return false;
    if (num3) *num3 = r.num;
    if (exp3) *exp3 = e;
    return true;
}

} // namespace weakmix

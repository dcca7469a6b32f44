#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>

namespace lipsharp::num {

/// A nonnegative-or-signed real carried as mantissa * 2^exponent with a 64-bit
/// exponent, for quantities like 2^{-k_n} (k_3 = 546) or the divergence
/// schedule index that leave the double range long before they stop mattering.
///
/// Invariant: mantissa == 0 (value zero) or 0.5 <= |mantissa| < 1.
struct Exp2 {
    double m = 0.0;
    std::int64_t e = 0;

    Exp2() = default;

    static Exp2 from_double(double v) {
        Exp2 r;
        if (v == 0.0) return r;
        int ex = 0;
        r.m = std::frexp(v, &ex);
        r.e = ex;
        return r;
    }

    /// 2^k as an Exp2, exact.
    static Exp2 pow2(std::int64_t k) {
        Exp2 r;
        r.m = 0.5;
        r.e = k + 1;
        return r;
    }

    bool is_zero() const { return m == 0.0; }
    int sign() const { return m > 0.0 ? 1 : (m < 0.0 ? -1 : 0); }

    /// Clamps to +-inf / 0 outside the double range.
    double to_double() const {
        if (m == 0.0) return 0.0;
        if (e > 1100) return m > 0 ? std::numeric_limits<double>::infinity()
                                   : -std::numeric_limits<double>::infinity();
        if (e < -1100) return 0.0;
        return std::ldexp(m, static_cast<int>(e));
    }

    /// log2 of |value|; requires nonzero. Always fits a double (|e| < 2^63).
    double log2_abs() const { return static_cast<double>(e) + std::log2(std::fabs(m)); }
    double ln_abs() const { return log2_abs() * 0.6931471805599453; }

    Exp2 abs() const {
        Exp2 r = *this;
        r.m = std::fabs(r.m);
        return r;
    }

    friend Exp2 operator-(Exp2 a) {
        a.m = -a.m;
        return a;
    }

    friend Exp2 operator*(Exp2 a, Exp2 b) {
        if (a.is_zero() || b.is_zero()) return {};
        Exp2 r;
        int ex = 0;
        r.m = std::frexp(a.m * b.m, &ex);
        r.e = a.e + b.e + ex;
        return r;
    }

    friend Exp2 operator/(Exp2 a, Exp2 b) {
        if (a.is_zero()) return {};
        Exp2 r;
        int ex = 0;
        r.m = std::frexp(a.m / b.m, &ex);
        r.e = a.e - b.e + ex;
        return r;
    }

    friend Exp2 operator+(Exp2 a, Exp2 b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        // Align to the larger exponent; beyond 64 bits the smaller vanishes.
        if (a.e < b.e) std::swap(a, b);
        const std::int64_t d = a.e - b.e;
        if (d > 64) return a;
        Exp2 r;
        int ex = 0;
        const double s = a.m + std::ldexp(b.m, -static_cast<int>(d));
        if (s == 0.0) return {};
        r.m = std::frexp(s, &ex);
        r.e = a.e + ex;
        return r;
    }

    friend Exp2 operator-(Exp2 a, Exp2 b) { return a + (-b); }

    /// -1, 0, +1 comparison against another Exp2.
    friend int cmp(const Exp2& a, const Exp2& b) {
        const Exp2 d = a - b;
        return d.sign();
    }

    friend bool operator<(const Exp2& a, const Exp2& b) { return cmp(a, b) < 0; }
    friend bool operator<=(const Exp2& a, const Exp2& b) { return cmp(a, b) <= 0; }
    friend bool operator>(const Exp2& a, const Exp2& b) { return cmp(a, b) > 0; }
    friend bool operator>=(const Exp2& a, const Exp2& b) { return cmp(a, b) >= 0; }
    friend bool operator==(const Exp2& a, const Exp2& b) { return a.m == b.m && (a.is_zero() || a.e == b.e); }

    Exp2 sqrt_nonneg() const {
        if (is_zero()) return {};
        Exp2 r;
        double mm = m;
        std::int64_t ee = e;
        if (ee % 2 != 0) {
            mm = std::ldexp(mm, ee > 0 ? -1 : 1);
            ee += (ee > 0 ? 1 : -1);
        }
        int ex = 0;
        r.m = std::frexp(std::sqrt(mm), &ex);
        r.e = ee / 2 + ex;
        return r;
    }

    std::string str() const {
        if (is_zero()) return "0";
        const double l2 = log2_abs();
        if (std::fabs(l2) <= 900.0) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g", to_double());
            return buf;
        }
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%.17g*2^%lld", m, static_cast<long long>(e));
        return buf;
    }

    friend std::ostream& operator<<(std::ostream& os, const Exp2& v) { return os << v.str(); }
};

}  // namespace lipsharp::num

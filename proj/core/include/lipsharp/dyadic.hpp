#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lipsharp/exp2.hpp"

namespace lipsharp::num {

using BigInt = boost::multiprecision::cpp_int;

/// Exact dyadic rational num / 2^exp with an arbitrary-size numerator.
/// Canonical form: num odd, or num == 0 with exp == 0, or exp == 0.
/// All cube geometry runs on these; no rounding anywhere.
class Dyadic {
  public:
    Dyadic() = default;
    Dyadic(long v) : num_(v), exp_(0) {}  // NOLINT(google-explicit-constructor)
    Dyadic(BigInt num, std::int64_t exp) : num_(std::move(num)), exp_(exp) {
        if (exp_ < 0) throw std::invalid_argument("Dyadic: negative exponent");
        canonicalize();
    }

    /// Exact conversion; every finite double is a dyadic rational.
    static Dyadic from_double(double v) {
        if (!std::isfinite(v)) throw std::invalid_argument("Dyadic: non-finite double");
        if (v == 0.0) return Dyadic();
        int ex = 0;
        double m = std::frexp(v, &ex);  // v = m * 2^ex, |m| in [0.5,1)
        // m * 2^53 is integral.
        const auto scaled = static_cast<long long>(std::ldexp(m, 53));
        const std::int64_t e = 53 - ex;
        if (e >= 0) return Dyadic(BigInt(scaled), e);
        BigInt n(scaled);
        n <<= static_cast<unsigned>(-e);
        return Dyadic(n, 0);
    }

    /// 2^{-k} for k >= 0, exact.
    static Dyadic pow2_neg(std::int64_t k) { return Dyadic(BigInt(1), k); }
    /// 2^{k} for k >= 0, exact.
    static Dyadic pow2_pos(std::int64_t k) {
        BigInt n(1);
        n <<= static_cast<unsigned>(k);
        return Dyadic(n, 0);
    }

    const BigInt& numerator() const { return num_; }
    std::int64_t exponent() const { return exp_; }
    bool is_zero() const { return num_ == 0; }
    int sign() const { return num_ == 0 ? 0 : (num_ > 0 ? 1 : -1); }

    friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
        const std::int64_t e = std::max(a.exp_, b.exp_);
        BigInt n = (a.num_ << static_cast<unsigned>(e - a.exp_)) +
                   (b.num_ << static_cast<unsigned>(e - b.exp_));
        return Dyadic(std::move(n), e);
    }
    friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }
    friend Dyadic operator-(const Dyadic& a) {
        Dyadic r = a;
        r.num_ = -r.num_;
        return r;
    }
    friend Dyadic operator*(const Dyadic& a, const Dyadic& b) {
        return Dyadic(a.num_ * b.num_, a.exp_ + b.exp_);
    }

    Dyadic abs() const {
        Dyadic r = *this;
        if (r.num_ < 0) r.num_ = -r.num_;
        return r;
    }

    Dyadic pow(unsigned n) const {
        Dyadic r(1);
        Dyadic base = *this;
        while (n > 0) {
            if (n & 1u) r = r * base;
            base = base * base;
            n >>= 1u;
        }
        return r;
    }

    friend int cmp(const Dyadic& a, const Dyadic& b) {
        const Dyadic d = a - b;
        return d.sign();
    }
    friend bool operator<(const Dyadic& a, const Dyadic& b) { return cmp(a, b) < 0; }
    friend bool operator<=(const Dyadic& a, const Dyadic& b) { return cmp(a, b) <= 0; }
    friend bool operator>(const Dyadic& a, const Dyadic& b) { return cmp(a, b) > 0; }
    friend bool operator>=(const Dyadic& a, const Dyadic& b) { return cmp(a, b) >= 0; }
    friend bool operator==(const Dyadic& a, const Dyadic& b) { return a.num_ == b.num_ && a.exp_ == b.exp_; }
    friend bool operator!=(const Dyadic& a, const Dyadic& b) { return !(a == b); }

    /// floor(value) as a BigInt (exact).
    BigInt floor() const {
        if (exp_ == 0) return num_;
        BigInt q = num_ >> static_cast<unsigned>(exp_);
        // cpp_int shift truncates toward -inf for negatives? It truncates the
        // magnitude; fix up to floor semantics.
        if (num_ < 0) {
            BigInt back = q << static_cast<unsigned>(exp_);
            if (back != num_ && q * (BigInt(1) << static_cast<unsigned>(exp_)) > num_) q -= 1;
        }
        return q;
    }

    bool is_integral() const { return exp_ == 0; }

    /// Mantissa/exponent view; keeps ~53 bits of the numerator.
    Exp2 to_exp2() const {
        if (num_ == 0) return {};
        const bool neg = num_ < 0;
        BigInt a = neg ? BigInt(-num_) : num_;
        const std::int64_t bits = static_cast<std::int64_t>(boost::multiprecision::msb(a)) + 1;
        double mant;
        if (bits <= 62) {
            mant = static_cast<double>(a.convert_to<long long>());
        } else {
            BigInt top = a >> static_cast<unsigned>(bits - 62);
            mant = std::ldexp(static_cast<double>(top.convert_to<long long>()),
                              0);  // top 62 bits
        }
        Exp2 r = Exp2::from_double(neg ? -mant : mant);
        r.e += (bits <= 62 ? 0 : bits - 62) - exp_;
        return r;
    }

    double to_double() const { return to_exp2().to_double(); }

    /// "p/2^e" exact form.
    std::string str() const {
        if (exp_ == 0) return num_.str();
        return num_.str() + "/2^" + std::to_string(exp_);
    }

  private:
    void canonicalize() {
        if (num_ == 0) {
            exp_ = 0;
            return;
        }
        while (exp_ > 0 && (num_ & 1) == 0) {
            num_ >>= 1;
            --exp_;
        }
    }

    BigInt num_ = 0;
    std::int64_t exp_ = 0;
};

/// ell-infinity norm of an exact vector.
inline Dyadic linf_norm(const std::vector<Dyadic>& v) {
    Dyadic m(0);
    for (const auto& c : v) {
        Dyadic a = c.abs();
        if (a > m) m = a;
    }
    return m;
}

/// Squared Euclidean norm, exact.
inline Dyadic l2_norm_sq(const std::vector<Dyadic>& v) {
    Dyadic s(0);
    for (const auto& c : v) s = s + c * c;
    return s;
}

/// Sign of (v - e^{-x}) for exact dyadic v and dyadic x > 0, decided by
/// alternating-series brackets of e^{-x} in exact integer arithmetic.
/// Terminates because v, being rational, never equals e^{-x}.
int cmp_exp_neg(const Dyadic& v, const Dyadic& x);

}  // namespace lipsharp::num

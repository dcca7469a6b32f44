#include "lipsharp/dyadic.hpp"

namespace lipsharp::num {

namespace {

BigInt pow_big(const BigInt& base, unsigned n) {
    BigInt r(1), b = base;
    while (n > 0) {
        if (n & 1u) r *= b;
        b *= b;
        n >>= 1u;
    }
    return r;
}

}  // namespace

int cmp_exp_neg(const Dyadic& v, const Dyadic& x) {
    if (x.sign() <= 0) throw std::invalid_argument("cmp_exp_neg: x must be positive");
    if (v.sign() <= 0) return -1;  // e^{-x} > 0
    if (v >= Dyadic(1)) return 1;  // e^{-x} < 1 for x > 0

    // x = a / 2^s, v = p / 2^t (a, p > 0).
    const BigInt& a = x.numerator();
    const std::int64_t s = x.exponent();
    const BigInt& p = v.numerator();
    const std::int64_t t = v.exponent();

    // Partial sums S_m of sum (-1)^k x^k / k! bracket e^{-x} once the terms
    // decrease, i.e. for k >= x. Start above that and widen until decidable.
    std::int64_t m = 4;
    {
        const BigInt ceil_x = (x.numerator() + (BigInt(1) << static_cast<unsigned>(s)) - 1) >>
                              static_cast<unsigned>(s);
        const auto cx = ceil_x.convert_to<std::int64_t>();
        if (2 * cx + 3 > m) m = 2 * cx + 3;
    }

    for (int rounds = 0; rounds < 64; ++rounds, m += 2) {
        // S_m = N_m / (2^{s m} m!),  N_m = sum_k (-1)^k a^k 2^{s(m-k)} m!/k!.
        BigInt Nm = 0;
        BigInt coeff = 1;  // m!/k! built downward from k = m
        BigInt apow = pow_big(a, static_cast<unsigned>(m));
        // iterate k = m .. 0; maintain a^k and m!/k!
        for (std::int64_t k = m; k >= 0; --k) {
            BigInt term = apow * coeff;
            term <<= static_cast<unsigned>(s * (m - k));
            if (k % 2 == 0)
                Nm += term;
            else
                Nm -= term;
            if (k > 0) {
                coeff *= k;
                apow /= a;
            }
        }
        // sign of v - S_m  =  sign(p * 2^{s m} m! - N_m * 2^t), denominators > 0.
        BigInt mfact = 1;
        for (std::int64_t i = 2; i <= m; ++i) mfact *= i;
        BigInt lhs = p * mfact;
        lhs <<= static_cast<unsigned>(s * m);
        BigInt rhs = Nm << static_cast<unsigned>(t);
        const int c = lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
        // m even: S_m > e^{-x}; m odd: S_m < e^{-x}.
        if (m % 2 == 0) {
            if (c >= 0) return 1;  // v >= S_m > e^{-x}
        } else {
            if (c <= 0) return -1;  // v <= S_m < e^{-x}
        }
        // Otherwise v is inside the current bracket; tighten.
    }
    // Unreachable for rational v at sane magnitudes; conservative fallback.
    const double approx = std::exp(-x.to_double());
    const double vd = v.to_double();
    return vd < approx ? -1 : 1;
}

}  // namespace lipsharp::num

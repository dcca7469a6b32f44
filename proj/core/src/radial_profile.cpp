#include "lipsharp/radial_profile.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lipsharp::lorentz {

RadialProfile log_capacity_profile(int N) {
    if (N < 2) throw std::invalid_argument("log_capacity_profile: N >= 2");
    RadialProfile g;
    g.name = "log";
    g.params = {static_cast<double>(N)};
    g.support_measure = 1.0;
    g.dim_hint = N;
    g.monotone_up_to = std::exp(1.0 - N);
    const double invN = 1.0 / N;
    g.eval = [invN](double t) { return std::pow(t, -invN) / std::log(std::exp(1.0) / t); };
    g.eval_lninv = [invN](double lninv) {
        // g*(t) = e^{lninv/N} / (1 + lninv)
        Exp2 r = Exp2::pow2(0);  // 1
        const double log2val = lninv * invN * 1.4426950408889634;  // log2 e^{lninv/N}
        const auto whole = static_cast<std::int64_t>(std::floor(log2val));
        r.m = std::exp2(log2val - static_cast<double>(whole)) * 0.5;
        r.e = whole + 1;
        const Exp2 den = Exp2::from_double(1.0 + lninv);
        return r / den;
    };
    // For every N: t^{1/N-1} g*(t) = 1 / (t log(e/t)); u(r) = log log(e/r).
    g.u0_divergent = [](int) { return true; };
    g.u_closed_lninv = [](int, double lninv) { return std::log1p(lninv); };
    g.u_inverse_lninv = [](int, double u) { return std::expm1(u); };
    // (N, q) norm integrand: (t^{1/N} g*)^q dt/t = (log(e/t))^{-q} dt/t.
    //   q = 1: partial over (r, 1] = log(1 + ln(1/r))           (divergent)
    //   q > 1: partial over (r, 1] = (1 - (1+ln(1/r))^{1-q})/(q-1)
    g.norm_partial_lninv = [](int /*N*/, double q, const Exp2& lninv) {
        if (q == 1.0) {
            // log(1 + lninv); lninv may be enormous (exponent form).
            if (lninv.is_zero()) return 0.0;
            if (lninv.e > 64) return lninv.ln_abs();
            return std::log1p(lninv.to_double());
        }
        const double l = lninv.e > 64 ? std::numeric_limits<double>::infinity() : lninv.to_double();
        return (1.0 - std::pow(1.0 + l, 1.0 - q)) / (q - 1.0);
    };
    g.norm_divergence_cert = [](int /*N*/, double q) { return q <= 1.0 ? 1 : 0; };
    return g;
}

RadialProfile constant_profile(double c, double m) {
    if (!(c >= 0.0) || !(m > 0.0)) throw std::invalid_argument("constant_profile: c >= 0, m > 0");
    RadialProfile g;
    g.name = "constant";
    g.params = {c, m};
    g.support_measure = m;
    g.monotone_up_to = m;
    g.eval = [c](double) { return c; };
    g.eval_lninv = [c](double) { return Exp2::from_double(c); };
    g.u0_divergent = [](int) { return false; };
    // u(r) = c N (m^{1/N} - r^{1/N}).
    g.u_closed_lninv = [c, m](int N, double lninv) {
        const double r_pow = std::exp(-lninv / N);
        return c * N * (std::pow(m, 1.0 / N) - r_pow);
    };
    g.u_inverse_lninv = [c, m](int N, double u) {
        const double r_pow = std::pow(m, 1.0 / N) - u / (c * N);
        return -static_cast<double>(N) * std::log(r_pow);
    };
    // (N,q): c^q (N/q) (m^{q/N} - r^{q/N}).
    g.norm_partial_lninv = [c, m](int N, double q, const Exp2& lninv) {
        const double l = lninv.e > 64 ? std::numeric_limits<double>::infinity()
                                      : lninv.to_double();
        const double r_pow = std::exp(-l * q / N);
        return std::pow(c, q) * (N / q) * (std::pow(m, q / N) - r_pow);
    };
    g.norm_divergence_cert = [](int, double) { return 0; };
    return g;
}

RadialProfile power_profile(double p, double m) {
    if (!(p > 0.0) || !(m > 0.0)) throw std::invalid_argument("power_profile: p > 0, m > 0");
    RadialProfile g;
    g.name = "power";
    g.params = {p, m};
    g.support_measure = m;
    g.monotone_up_to = m;
    g.eval = [p](double t) { return std::pow(t, -p); };
    g.eval_lninv = [p](double lninv) {
        Exp2 r;
        const double log2val = lninv * p * 1.4426950408889634;
        const auto whole = static_cast<std::int64_t>(std::floor(log2val));
        r.m = std::exp2(log2val - static_cast<double>(whole)) * 0.5;
        r.e = whole + 1;
        return r;
    };
    g.u0_divergent = [p](int N) { return p >= 1.0 / N; };
    // No closed-form hints on purpose: this profile exercises the plain
    // quadrature/growth-detection paths.
    return g;
}

bool spot_check_nonincreasing(const RadialProfile& g, int samples) {
    double prev = std::numeric_limits<double>::infinity();
    const double hi = std::min(g.monotone_up_to, g.support_measure);
    // geometric grid, t increasing toward the certified bound; g* must not increase
    for (int i = samples; i >= 0; --i) {
        const double t = hi * std::pow(2.0, -0.25 * i);
        const double v = g.eval(t);
        if (!(v >= 0.0)) return false;
        if (v > prev * (1.0 + 1e-12)) return false;
        prev = v;
    }
    return true;
}

}  // namespace lipsharp::lorentz

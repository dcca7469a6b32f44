#include "lipsharp/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lipsharp/quadrature.hpp"

namespace lipsharp::lorentz {

using num::adaptive_simpson;

LorentzIndex::LorentzIndex(double Q_, double q_) : Q(Q_), q(q_) {
    if (!(Q >= 1.0) || !(q >= 1.0) || !(q <= Q))
        throw std::invalid_argument("LorentzIndex: need 1 <= q <= Q");
    if (!std::isfinite(q)) throw std::invalid_argument("LorentzIndex: q = inf branch not supported");
}

NormResult lorentz_norm(const StepFunction& f, const LorentzIndex& idx) {
    const StepFunction fs = f.rearranged() ? f : rearrangement(f);
    // integral of (t^{1/Q} v)^q dt/t over [t0, t1) = v^q (Q/q)(t1^{q/Q} - t0^{q/Q})
    const double e = idx.q / idx.Q;
    double acc = 0.0;
    for (std::size_t i = 0; i < fs.pieces(); ++i) {
        const double v = fs.values()[i];
        if (v == 0.0) continue;
        const double t0 = fs.breakpoints()[i], t1 = fs.breakpoints()[i + 1];
        acc += std::pow(v, idx.q) * (std::pow(t1, e) - std::pow(t0, e)) / e;
    }
    NormResult r;
    r.status = NormStatus::Finite;
    r.value = std::pow(acc, 1.0 / idx.q);
    r.err = r.value * 1e-14;
    return r;
}

namespace {

/// Runs the divergence schedule r = 10^{-3i} with geometric escalation of i,
/// evaluating partial integrals by the profile's closed form. Returns the
/// certificate once the threshold is crossed.
DivergenceCert certify_divergence_closed(const RadialProfile& g, int N, double q,
                                         const NormOptions& opt) {
    const double ln10_3 = 3.0 * std::log(10.0);
    Exp2 i = Exp2::from_double(1.0);
    DivergenceCert cert;
    cert.threshold = opt.div_threshold;
    for (int step = 0; step < 4000; ++step) {
        const Exp2 lninv = i * Exp2::from_double(ln10_3);  // ln(1/r), r = 10^{-3i}
        const double partial = g.norm_partial_lninv(N, q, lninv);
        if (partial > opt.div_threshold) {
            cert.schedule_i = i;
            cert.partial = partial;
            return cert;
        }
        i = i * i + Exp2::from_double(1.0);  // squaring escalation, keeps i integral-ish
    }
    throw std::runtime_error("divergence certificate: schedule exhausted");
}

double norm_integrand(const RadialProfile& g, const LorentzIndex& idx, double t) {
    const double gs = g.eval(t);
    if (gs == 0.0) return 0.0;
    return std::pow(t, idx.q / idx.Q - 1.0) * std::pow(gs, idx.q);
}

}  // namespace

NormResult lorentz_norm(const RadialProfile& g, const LorentzIndex& idx, const NormOptions& opt) {
    NormResult out;
    const double mK = g.support_measure;
    const bool hinted = g.dim_hint > 0 && idx.Q == static_cast<double>(g.dim_hint);

    // Certificates first: a declared divergent norm gets the growth-schedule
    // certificate; a declared finite one can use the closed-form partial.
    if (hinted && g.norm_divergence_cert) {
        const int c = g.norm_divergence_cert(g.dim_hint, idx.q);
        if (c > 0 && g.has_norm_closed_form()) {
            out.cert = certify_divergence_closed(g, g.dim_hint, idx.q, opt);
            out.status = NormStatus::Divergent;
            return out;
        }
    }
    if (hinted && g.has_norm_closed_form() && g.norm_divergence_cert &&
        g.norm_divergence_cert(g.dim_hint, idx.q) == 0) {
        // Finite: total = lim_{r->0} partial; the closed form saturates.
        const Exp2 huge = Exp2::pow2(1000);
        const double total = g.norm_partial_lninv(g.dim_hint, idx.q, huge);
        out.status = NormStatus::Finite;
        out.value = std::pow(total, 1.0 / idx.q);
        out.err = out.value * 1e-12;
        return out;
    }

    // Generic path: shrinking-window quadrature with growth detection.
    double acc = 0.0, acc_err = 0.0;
    double prev_increment = -1.0;
    double hi = mK;
    for (int i = 1; i <= opt.max_schedule_steps; ++i) {
        const double lo = mK * std::pow(10.0, -3.0 * i);
        if (lo >= hi) continue;
        const auto q = adaptive_simpson([&](double t) { return norm_integrand(g, idx, t); }, lo,
                                        hi, opt.quad_tol);
        acc += q.value;
        acc_err += q.err;
        if (acc > opt.div_threshold) {
            out.status = NormStatus::Divergent;
            DivergenceCert cert;
            cert.schedule_i = Exp2::from_double(static_cast<double>(i));
            cert.partial = acc;
            cert.threshold = opt.div_threshold;
            out.cert = cert;
            return out;
        }
        const double inc = q.value;
        if (prev_increment >= 0.0 && inc <= 0.5 * prev_increment && inc < opt.quad_tol) {
            // Geometric decay: remaining tail bounded by the last increment.
            out.status = NormStatus::Finite;
            out.value = std::pow(acc, 1.0 / idx.q);
            out.err = acc > 0.0 ? (acc_err + 2.0 * inc) /
                                      (idx.q * std::pow(acc, 1.0 - 1.0 / idx.q))
                                : 0.0;
            return out;
        }
        prev_increment = inc;
        hi = lo;
    }
    out.status = NormStatus::Inconclusive;
    out.value = std::pow(acc, 1.0 / idx.q);
    return out;
}

NormResult radial_map_norm(const RadialProfile& g, int N, const LorentzIndex& idx,
                           const NormOptions& opt) {
    if (N < 2) throw std::invalid_argument("radial_map_norm: N >= 2");
    // x -> g*(Omega_N |x|^N) and g* have identical distribution functions, so
    // the norms agree; no N-dimensional quadrature.
    return lorentz_norm(g, idx, opt);
}

NormResult annulus_profile_norm(const RadialProfile& g, int N, double qS, double t_lo,
                                double t_hi, const NormOptions& opt) {
    if (!(t_hi > t_lo) || t_lo < 0.0)
        throw std::invalid_argument("annulus_profile_norm: need 0 <= t_lo < t_hi");
    NormResult out;
    const LorentzIndex idx(static_cast<double>(N), qS);
    const double T = t_hi - t_lo;

    if (t_lo == 0.0) {
        // delta -> 0 limit: integral over (0, t_hi] of the full profile.
        if (g.dim_hint == N && g.has_norm_closed_form() && g.norm_divergence_cert &&
            g.norm_divergence_cert(N, qS) == 0) {
            const Exp2 huge = Exp2::pow2(1000);
            const double total = g.norm_partial_lninv(N, qS, huge);
            const double above = g.norm_partial_lninv(N, qS, Exp2::from_double(std::log(1.0 / t_hi)));
            out.status = NormStatus::Finite;
            out.value = std::pow(total - above, 1.0 / qS);
            out.err = out.value * 1e-12;
            return out;
        }
        // fall through to the windowed quadrature on (0, T]
        RadialProfile shifted = g;  // t_lo == 0: same profile truncated
        shifted.support_measure = T;
        shifted.norm_partial_lninv = nullptr;
        shifted.norm_divergence_cert = nullptr;
        shifted.dim_hint = 0;
        return lorentz_norm(shifted, idx, opt);
    }

    // Rearranged restriction: h*(t) = g*(t_lo + t) on (0, T]. Valid as the
    // rearrangement only where the profile is certified nonincreasing.
    if (t_hi > g.monotone_up_to * (1.0 + 1e-12))
        throw std::invalid_argument(
            "annulus_profile_norm: annulus beyond the certified monotone range");
    // No singularity at 0, but t^{q/N - 1} needs an analytic head bracket when
    // q < N; bracket by the endpoint extremes of g* over [t_lo, t_lo + h].
    const double e = qS / N;
    auto integrand = [&](double t) { return std::pow(t, e - 1.0) * std::pow(g.eval(t_lo + t), qS); };
    double head_lo = 0.0, head_hi = 0.0, h = std::min(T * 1e-3, t_lo * 1e-3);
    if (h <= 0.0) h = T * 1e-6;
    for (int i = 0; i < 60; ++i) {
        const double ga = std::pow(g.eval(t_lo), qS), gb = std::pow(g.eval(t_lo + h), qS);
        const double vhi = std::max(ga, gb) * std::pow(h, e) / e;
        const double vlo = std::min(ga, gb) * std::pow(h, e) / e;
        if (vhi - vlo <= opt.quad_tol || vhi <= opt.quad_tol) {
            head_lo = vlo;
            head_hi = vhi;
            break;
        }
        h *= 0.125;
    }
    const auto q = adaptive_simpson(integrand, h, T, opt.quad_tol);
    const double total = q.value + 0.5 * (head_lo + head_hi);
    out.status = NormStatus::Finite;
    out.value = std::pow(total, 1.0 / qS);
    out.err = total > 0.0 ? (q.err + 0.5 * (head_hi - head_lo)) /
                                (qS * std::pow(total, 1.0 - 1.0 / qS))
                          : 0.0;
    return out;
}

}  // namespace lipsharp::lorentz

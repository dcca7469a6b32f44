#include "lipsharp/capacity.hpp"

#include <cmath>

#include "lipsharp/quadrature.hpp"

namespace lipsharp::capacity {

using num::adaptive_simpson;

double unit_ball_volume(int N) {
    return std::pow(M_PI, 0.5 * N) / std::tgamma(0.5 * N + 1.0);
}

UValue u_value(const RadialProfile& g, int N, double r, const NormOptions& opt) {
    if (N < 2) throw std::invalid_argument("u_value: N >= 2");
    if (r < 0.0 || r > g.support_measure) throw std::invalid_argument("u_value: 0 <= r <= m_K");
    UValue out;
    if (r == 0.0 && g.u0_divergent && g.u0_divergent(N)) {
        out.status = NormStatus::Divergent;
        return out;
    }
    if (r == g.support_measure) {
        out.status = NormStatus::Finite;
        return out;
    }
    if (g.has_u_closed_form()) {
        out.status = NormStatus::Finite;
        if (r > 0.0) {
            out.value = g.u_closed_lninv(N, std::log(1.0 / r));
        } else {
            // u(0) finite, reached as a limit through the closed form.
            out.value = g.u_closed_lninv(N, 709.0);
            out.err = std::fabs(out.value - g.u_closed_lninv(N, 350.0));
        }
        out.err += std::fabs(out.value) * 1e-13;
        return out;
    }
    // Quadrature over shrinking windows toward the lower endpoint.
    const double invN = 1.0 / N;
    auto integrand = [&](double t) { return std::pow(t, invN - 1.0) * g.eval(t); };
    double hi = g.support_measure;
    double acc = 0.0, accerr = 0.0, prev_inc = -1.0;
    for (int i = 0; i < opt.max_schedule_steps; ++i) {
        const double lo = std::max(r, hi * 1e-3);
        const auto q = adaptive_simpson(integrand, lo, hi, opt.quad_tol);
        acc += q.value;
        accerr += q.err;
        if (lo == r && r > 0.0) {
            out.status = NormStatus::Finite;
            out.value = acc;
            out.err = accerr;
            return out;
        }
        if (acc > opt.div_threshold) {
            out.status = NormStatus::Divergent;
            out.value = acc;
            return out;
        }
        if (prev_inc >= 0.0 && q.value <= 0.5 * prev_inc && q.value < opt.quad_tol) {
            out.status = NormStatus::Finite;
            out.value = acc;
            out.err = accerr + 2.0 * q.value;
            return out;
        }
        prev_inc = q.value;
        hi = lo;
        if (hi <= 1e-300) break;
    }
    out.status = NormStatus::Inconclusive;
    out.value = acc;
    return out;
}

double u_from_lninv(const RadialProfile& g, int N, double lninv_t, const NormOptions& opt) {
    if (g.has_u_closed_form()) return g.u_closed_lninv(N, lninv_t);
    const double t = std::exp(-lninv_t);
    if (t <= 0.0)
        throw std::invalid_argument("u_from_lninv: t below double range needs a closed form");
    const auto u = u_value(g, N, t, opt);
    if (!u.finite()) throw CapacityError("u_from_lninv: u not finite at requested radius");
    return u.value;
}

namespace {

/// || g*(t_delta + .) || on (0, t_eps - t_delta], the Lip-field annulus norm
/// without the tau C lambda prefactors. Both radii arrive as ln(1/t) so deep
/// bumps (t below double range) stay well-posed; falls back to the
/// conservative delta -> 0 limit when t_delta is out of range.
double annulus_norm_lninv(const BumpSpec& spec, double lninv_tdelta, double lninv_teps,
                          const NormOptions& opt) {
    const auto& g = spec.profile;
    const double t_lo = lninv_tdelta < 700.0 ? std::exp(-lninv_tdelta) : 0.0;
    const double t_hi = lninv_teps < 700.0 ? std::exp(-lninv_teps) : 0.0;
    if (t_hi > 0.0) {
        const auto n = lorentz::annulus_profile_norm(g, spec.N, spec.q_S, t_lo, t_hi, opt);
        if (!n.finite()) throw CapacityError("make_bump: annulus norm not computable");
        return n.value;
    }
    // Outer radius below double range: closed form over (t_eps, m_K] needed.
    const bool hinted = g.dim_hint == spec.N && g.has_norm_closed_form() &&
                        g.norm_divergence_cert && g.norm_divergence_cert(spec.N, spec.q_S) == 0;
    if (!hinted)
        throw CapacityError("make_bump: annulus below float range needs closed-form norms");
    const double total = g.norm_partial_lninv(spec.N, spec.q_S, Exp2::pow2(1000));
    const double above = g.norm_partial_lninv(spec.N, spec.q_S, Exp2::from_double(lninv_teps));
    return std::pow(std::max(total - above, 0.0), 1.0 / spec.q_S);
}

}  // namespace

Bump make_bump(const BumpSpec& spec, const NormOptions& opt) {
    if (spec.N < 2) throw std::invalid_argument("make_bump: N >= 2");
    if (spec.eps.sign() <= 0) throw std::invalid_argument("make_bump: eps > 0");
    if (spec.tau.sign() < 0 || spec.tau > Exp2::from_double(1.0))
        throw std::invalid_argument("make_bump: tau in [0,1]");
    if (!spec.tau.is_zero() && spec.norm_budget.sign() <= 0)
        throw std::invalid_argument("make_bump: positive norm budget required");

    Bump b;
    b.spec = spec;
    b.omega_N = unit_ball_volume(spec.N);
    b.C_N = spec.N * std::pow(b.omega_N, 1.0 / spec.N);

    Exp2 half_eps = spec.eps;
    half_eps.e -= 1;
    const double lninv_teps =
        -(static_cast<double>(spec.N) * half_eps.log2_abs()) * M_LN2 - std::log(b.omega_N);
    if (lninv_teps < 700.0 && std::exp(-lninv_teps) > spec.profile.support_measure)
        throw std::invalid_argument("make_bump: outer radius exceeds profile support");
    b.u1 = u_from_lninv(spec.profile, spec.N, lninv_teps, opt);

    if (spec.tau.is_zero()) {
        // Zero bump: any admissible inner radius.
        b.u0 = Exp2::from_double(b.u1 + 1.0);
        b.lambda = Exp2::from_double(1.0);
        b.Lambda = Exp2::from_double(b.u1);
        b.log2_delta = half_eps.log2_abs() - 1.0;
        return b;
    }

    const bool degenerate = spec.profile.u0_divergent && spec.profile.u0_divergent(spec.N);
    const double norm_cap = annulus_norm_lninv(spec, 1e9, lninv_teps, opt);  // delta -> 0 limit
    b.annulus_norm = norm_cap;
    if (norm_cap == 0.0) {
        // Lip field vanishes (e.g. zero profile); any inner radius works.
        b.u0 = Exp2::from_double(b.u1 + 1.0);
        b.lambda = Exp2::from_double(1.0);
        b.Lambda = Exp2::from_double(b.u1);
        b.log2_delta = half_eps.log2_abs() - 1.0;
        return b;
    }

    const Exp2 denom = spec.tau * Exp2::from_double(b.C_N * norm_cap);
    const Exp2 lambda_target = spec.norm_budget / denom;

    // The squaring search gains u0 only ~ln 2 per step, so budgets demanding
    // a u-gap beyond ~280 (lambda* < 1/280) jump straight to the u-space
    // target instead of iterating.
    if (lambda_target < Exp2::from_double(1.0 / 280.0)) {
        // Deep budget: direct u-space targeting; only reachable for
        // capacity-degenerate profiles with closed-form u (u0 may be enormous).
        if (!degenerate || !spec.profile.has_u_closed_form())
            throw CapacityError(
                "profile not capacity-degenerate: budget unreachable as delta->0");
        const Exp2 gap = (Exp2::from_double(1.0) / lambda_target) * Exp2::from_double(1.0 + 1e-9);
        b.u0 = Exp2::from_double(b.u1) + gap;
        b.lambda = Exp2::from_double(1.0) / gap;
        b.Lambda = b.lambda * Exp2::from_double(b.u1);
        b.lip_norm = spec.tau * Exp2::from_double(b.C_N * norm_cap) * b.lambda;
        b.search_steps = -1;
        if (spec.profile.u_inverse_lninv) {
            const double u0d = b.u0.to_double();
            if (std::isfinite(u0d) && u0d < 700.0) {
                const double lninv_td = spec.profile.u_inverse_lninv(spec.N, u0d);
                b.log2_delta = -(lninv_td + std::log(b.omega_N)) / (spec.N * M_LN2);
            }
        }
        if (b.lip_norm > spec.norm_budget)
            throw CapacityError("make_bump: post-hoc norm check failed");
        return b;
    }

    // Monotone search: log2(delta) doubles each step (delta <- delta^2),
    // starting from eps/4. lambda is nonincreasing along the schedule, so the
    // first passing step is returned; profiles with finite u(0) plateau and
    // raise the non-degeneracy error.
    double log2_delta = half_eps.log2_abs() - 1.0;  // eps/4
    double prev_u0 = -std::numeric_limits<double>::infinity();
    int plateau = 0;
    for (int step = 0; step <= 600; ++step) {
        const double lninv_td =
            -static_cast<double>(spec.N) * log2_delta * M_LN2 - std::log(b.omega_N);
        if (lninv_td > lninv_teps) {
            const double u0 = u_from_lninv(spec.profile, spec.N, lninv_td, opt);
            if (u0 > b.u1) {
                const double R = annulus_norm_lninv(spec, lninv_td, lninv_teps, opt);
                const Exp2 lambda = Exp2::from_double(1.0 / (u0 - b.u1));
                const Exp2 achieved = spec.tau * Exp2::from_double(b.C_N * R) * lambda;
                if (achieved <= spec.norm_budget) {
                    b.u0 = Exp2::from_double(u0);
                    b.lambda = lambda;
                    b.Lambda = lambda * Exp2::from_double(b.u1);
                    b.annulus_norm = R;
                    b.lip_norm = achieved;
                    b.search_steps = step;
                    b.log2_delta = log2_delta;
                    return b;
                }
            }
            if (u0 <= prev_u0 + std::fabs(prev_u0) * 1e-12 + 1e-15) {
                if (++plateau >= 3)
                    throw CapacityError(
                        "profile not capacity-degenerate: budget unreachable as delta->0");
            } else {
                plateau = 0;
            }
            prev_u0 = u0;
        }
        log2_delta *= 2.0;
        if (!std::isfinite(log2_delta)) break;
    }
    throw CapacityError("profile not capacity-degenerate: budget unreachable as delta->0");
}

namespace {

/// phi(x)/tau from the squared radius; shared by exact and double entry points.
Exp2 eval_bump_unit(const Bump& b, const Exp2& r2) {
    if (r2.is_zero()) return Exp2::from_double(1.0);
    Exp2 half_eps = b.spec.eps;
    half_eps.e -= 1;
    const Exp2 r = r2.sqrt_nonneg();
    if (r >= half_eps) return Exp2{};
    const double lninv_t =
        -(static_cast<double>(b.spec.N) * r.log2_abs()) * M_LN2 - std::log(b.omega_N);
    const double u = u_from_lninv(b.spec.profile, b.spec.N, lninv_t);
    if (Exp2::from_double(u) >= b.u0) return Exp2::from_double(1.0);  // plateau, r <= delta
    Exp2 v = b.lambda * Exp2::from_double(u - b.u1);
    if (v.sign() < 0) return Exp2{};
    if (v > Exp2::from_double(1.0)) return Exp2::from_double(1.0);
    return v;
}

Exp2 bump_lip_unit(const Bump& b, const Exp2& r2) {
    if (r2.is_zero()) return Exp2{};
    Exp2 half_eps = b.spec.eps;
    half_eps.e -= 1;
    const Exp2 r = r2.sqrt_nonneg();
    if (r > half_eps) return Exp2{};
    const double lninv_t =
        -(static_cast<double>(b.spec.N) * r.log2_abs()) * M_LN2 - std::log(b.omega_N);
    const double u = u_from_lninv(b.spec.profile, b.spec.N, lninv_t);
    if (Exp2::from_double(u) >= b.u0) return Exp2{};  // inside the plateau
    Exp2 gstar;
    if (b.spec.profile.eval_lninv) {
        gstar = b.spec.profile.eval_lninv(lninv_t);
    } else {
        gstar = Exp2::from_double(b.spec.profile.eval(std::exp(-lninv_t)));
    }
    return Exp2::from_double(b.C_N) * b.lambda * gstar;
}

std::vector<Dyadic> offset_from_center(const Bump& b, const std::vector<Dyadic>& x) {
    if (x.size() != b.spec.center.size()) throw std::invalid_argument("bump: dimension mismatch");
    std::vector<Dyadic> d(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - b.spec.center[i];
    return d;
}

}  // namespace

Exp2 eval_bump(const Bump& b, const std::vector<Dyadic>& x) {
    const Exp2 r2 = num::l2_norm_sq(offset_from_center(b, x)).to_exp2();
    return b.spec.tau * eval_bump_unit(b, r2);
}

Exp2 bump_lip(const Bump& b, const std::vector<Dyadic>& x) {
    const Exp2 r2 = num::l2_norm_sq(offset_from_center(b, x)).to_exp2();
    return b.spec.tau * bump_lip_unit(b, r2);
}

double eval_bump_radial(const Bump& b, double r) {
    return (b.spec.tau * eval_bump_unit(b, Exp2::from_double(r * r))).to_double();
}

double bump_lip_radial(const Bump& b, double r) {
    return (b.spec.tau * bump_lip_unit(b, Exp2::from_double(r * r))).to_double();
}

Exp2 verify_bump_norm(const Bump& b, const NormOptions& opt) {
    if (b.zero()) return Exp2{};
    BumpSpec spec = b.spec;
    Exp2 half_eps = spec.eps;
    half_eps.e -= 1;
    const double lninv_teps =
        -(static_cast<double>(spec.N) * half_eps.log2_abs()) * M_LN2 - std::log(b.omega_N);
    double lninv_td = 1e9;  // below double range unless the inverse is available
    if (spec.profile.u_inverse_lninv) {
        const double u0d = b.u0.to_double();
        if (std::isfinite(u0d)) {
            const double cand = spec.profile.u_inverse_lninv(spec.N, u0d);
            if (std::isfinite(cand)) lninv_td = cand;
        }
    }
    const double R = annulus_norm_lninv(spec, lninv_td, lninv_teps, opt);
    return spec.tau * Exp2::from_double(b.C_N * R) * b.lambda;
}

}  // namespace lipsharp::capacity

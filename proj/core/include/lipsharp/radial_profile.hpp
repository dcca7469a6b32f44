#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lipsharp/exp2.hpp"

namespace lipsharp::lorentz {

using num::Exp2;

/// A nonincreasing profile g*: (0, m_K] -> [0, inf] with quadrature metadata.
/// Generates the capacity bumps; the closed-form hints let u-values and norm
/// tails be evaluated far below the floating-point range of r itself.
struct RadialProfile {
    std::string name = "custom";
    std::vector<double> params;
    double support_measure = 1.0;  // m_K = L^N(K)
    int dim_hint = 0;              // N the profile was built for (0 = none)
    /// Certified nonincreasing on (0, monotone_up_to]; equals m_K for truly
    /// monotone profiles. The default log profile turns around at e^{1-N},
    /// which is harmless: every annulus the construction touches sits far
    /// below that, and norms/u-integrals treat the profile as f* by
    /// definition.
    double monotone_up_to = 1.0;

    /// g*(t) for t in (0, m_K].
    std::function<double(double)> eval;

    /// g*(t) given lninv = ln(1/t); reaches t far below double range.
    std::function<Exp2(double)> eval_lninv;

    /// Certificate: is u(0) = ∫_0^{m_K} t^{1/N-1} g* dt infinite for dimension N?
    std::function<bool(int)> u0_divergent;

    /// Closed-form u(r) = ∫_r^{m_K} t^{1/N-1} g*(t) dt with lninv = ln(1/r).
    /// Optional; empty when only quadrature is available.
    std::function<double(int, double)> u_closed_lninv;

    /// Inverse of u along lninv: given a u-value, the ln(1/t) it is attained
    /// at (for serializing inner radii of bumps). Optional.
    std::function<double(int, double)> u_inverse_lninv;

    /// Closed-form partial norm integral ∫_r^{m_K} (t^{1/N} g*(t))^q dt/t for
    /// Q = N, with lninv = ln(1/r) in exponent form (the divergence schedule
    /// pushes r to 10^{-3i} with i itself in exponent form). Optional.
    std::function<double(int, double, const Exp2&)> norm_partial_lninv;

    /// Certificate for the (N, q) norm: +1 divergent, 0 finite, -1 unknown.
    std::function<int(int, double)> norm_divergence_cert;

    bool has_u_closed_form() const { return static_cast<bool>(u_closed_lninv); }
    bool has_norm_closed_form() const { return static_cast<bool>(norm_partial_lninv); }
};

/// The default capacity-degenerate witness: g*(t) = t^{-1/N} (log(e/t))^{-1}
/// on (0, 1]. Lies in L^{N,q} \ L^{N,1} for every q > 1; u(r) = log log(e/r).
RadialProfile log_capacity_profile(int N);

/// g* == c on (0, m]; u(0) finite (the non-degenerate error case).
RadialProfile constant_profile(double c, double m);

/// g*(t) = t^{-p} on (0, m]; power-type divergence (exercises the growth
/// detector without closed-form hints when hints are stripped).
RadialProfile power_profile(double p, double m);

/// Spot-check monotonicity of g* on a geometric grid over
/// (0, monotone_up_to]; returns false on the first violation. The
/// "monotonicity certificate" of profile data.
bool spot_check_nonincreasing(const RadialProfile& g, int samples = 256);

}  // namespace lipsharp::lorentz

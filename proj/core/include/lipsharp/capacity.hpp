#pragma once

#include <limits>
#include <stdexcept>
#include <vector>

#include "lipsharp/dyadic.hpp"
#include "lipsharp/exp2.hpp"
#include "lipsharp/lorentz.hpp"
#include "lipsharp/radial_profile.hpp"

namespace lipsharp::capacity {

using lorentz::NormOptions;
using lorentz::NormStatus;
using lorentz::RadialProfile;
using num::Dyadic;
using num::Exp2;

struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UValue {
    NormStatus status = NormStatus::Inconclusive;
    double value = 0.0;
    double err = 0.0;
    bool divergent() const { return status == NormStatus::Divergent; }
    bool finite() const { return status == NormStatus::Finite; }
};

/// u(r) = ∫_r^{m_K} t^{1/N-1} g*(t) dt. u(m_K) = 0, nonincreasing in r;
/// u(0) divergent exactly for capacity-degenerate profiles.
UValue u_value(const RadialProfile& g, int N, double r, const NormOptions& opt = {});

/// u at radius given by lninv_t = ln(1/t), t = Omega_N r^N; closed form
/// required beyond the double range of t.
double u_from_lninv(const RadialProfile& g, int N, double lninv_t,
                    const NormOptions& opt = {});

/// Volume of the unit ball in R^N.
double unit_ball_volume(int N);

struct BumpSpec {
    std::vector<Dyadic> center;  // a
    Exp2 eps;                    // outer radius budget; support ends at eps/2
    Exp2 tau;                    // plateau height in [0, 1]
    int N = 2;
    RadialProfile profile;
    Exp2 norm_budget;  // target for || Lip phi ||_{N, q_S}
    double q_S = 2.0;
};

/// One instantiated capacity bump. The inner radius delta enters every
/// formula only through u(Omega_N delta^N), so that u-value (u0) is the
/// stored parameter; for the log profile the admissible delta are doubly
/// exponentially small and log2(delta) fits a double only for shallow bumps.
struct Bump {
    BumpSpec spec;
    double omega_N = 0.0;
    double C_N = 0.0;  // N * Omega_N^{1/N}, the Lip-formula constant
    Exp2 u0;           // u at the inner radius (plateau edge)
    double u1 = 0.0;   // u at the outer radius eps/2
    Exp2 lambda;       // (u0 - u1)^{-1}
    Exp2 Lambda;       // lambda * u1
    double log2_delta = std::numeric_limits<double>::quiet_NaN();  // NaN if out of range
    double annulus_norm = 0.0;  // || g*(Omega_N|.|^N) restricted ||_{N,q_S}, no prefactors
    Exp2 lip_norm;              // achieved tau * C_N * lambda * annulus_norm
    int search_steps = -1;      // squaring steps; -1 = direct u-space targeting

    bool zero() const { return spec.tau.is_zero(); }
};

/// Builds the bump: picks the inner radius by monotone search (log-space
/// squaring of delta from eps/4) or, for budgets demanding lambda below
/// 2^{-40}, by direct u-space targeting. Throws CapacityError for profiles
/// with finite u(0) when the budget is unreachable.
Bump make_bump(const BumpSpec& spec, const NormOptions& opt = {});

/// phi value at offset x - a (exact dyadic). In [0, tau], radially
/// nonincreasing, zero beyond eps/2.
Exp2 eval_bump(const Bump& b, const std::vector<Dyadic>& x);

/// Pointwise Lipschitz constant field: tau * C_N * lambda * g*(Omega_N r^N)
/// on the annulus, 0 elsewhere.
Exp2 bump_lip(const Bump& b, const std::vector<Dyadic>& x);

/// Same, by plain double radius (grid harness convenience).
double eval_bump_radial(const Bump& b, double r);
double bump_lip_radial(const Bump& b, double r);

/// Post-construction re-verification of the Lip-field norm against the
/// budget via quadrature (annulus_profile_norm path). Returns the achieved
/// norm bound.
Exp2 verify_bump_norm(const Bump& b, const NormOptions& opt = {});

}  // namespace lipsharp::capacity

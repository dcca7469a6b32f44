#pragma once

#include <optional>
#include <string>

#include "lipsharp/exp2.hpp"
#include "lipsharp/radial_profile.hpp"
#include "lipsharp/step_function.hpp"

namespace lipsharp::lorentz {

using num::Exp2;

/// Lorentz index pair (Q, q), restricted to the semi-norm regime 1 <= q <= Q
/// with q finite.
struct LorentzIndex {
    double Q = 2.0;
    double q = 1.0;
    LorentzIndex() = default;
    LorentzIndex(double Q_, double q_);
};

enum class NormStatus { Finite, Divergent, Inconclusive };

/// Divergence certificate: the partial integral over (r, m_K] crossed the
/// threshold at r = 10^{-3i}; i is carried in mantissa*2^e form because the
/// crossing point of log-type divergence sits far outside the double range.
struct DivergenceCert {
    Exp2 schedule_i;
    double partial = 0.0;
    double threshold = 0.0;
};

struct NormResult {
    NormStatus status = NormStatus::Inconclusive;
    double value = 0.0;
    double err = 0.0;
    std::optional<DivergenceCert> cert;

    bool finite() const { return status == NormStatus::Finite; }
    bool divergent() const { return status == NormStatus::Divergent; }
};

struct NormOptions {
    double quad_tol = 1e-9;        // absolute tolerance per quadrature call
    double div_threshold = 1e6;    // partial-integral divergence threshold
    int max_schedule_steps = 100;  // r = 10^{-3i} window steps within float range
};

/// || f ||_{Q,q} = ( ∫_0^inf (t^{1/Q} f*(t))^q dt/t )^{1/q}, exact closed form
/// on the pieces of the rearrangement. Always finite for step functions.
NormResult lorentz_norm(const StepFunction& f, const LorentzIndex& idx);

/// Norm of a profile treated as its own rearrangement f* = g*. Closed-form
/// tails are used when the profile carries them (Q == dim_hint); otherwise
/// adaptive quadrature over a shrinking window schedule with growth-based
/// divergence detection. Never fabricates a finite value: non-convergence
/// within budget reports Inconclusive.
NormResult lorentz_norm(const RadialProfile& g, const LorentzIndex& idx,
                        const NormOptions& opt = {});

/// Norm of x -> g*(Omega_N |x|^N) on R^N: equal to lorentz_norm(g, idx) by
/// equimeasurability; computed through that identity, not by N-dim quadrature.
NormResult radial_map_norm(const RadialProfile& g, int N, const LorentzIndex& idx,
                           const NormOptions& opt = {});

/// (N, qS)-norm of the restriction of x -> g*(Omega_N |x|^N) to the annulus
/// {t_lo <= Omega_N |x|^N <= t_hi}; equals the norm of t -> g*(t_lo + t) on
/// (0, t_hi - t_lo]. t_lo == 0 gives the delta -> 0 limit. Used for bump
/// Lip-field budgets.
NormResult annulus_profile_norm(const RadialProfile& g, int N, double qS, double t_lo,
                                double t_hi, const NormOptions& opt = {});

}  // namespace lipsharp::lorentz

#pragma once

#include <map>
#include <mutex>
#include <vector>

#include "lipsharp/capacity.hpp"
#include "lipsharp/cube_tree.hpp"
#include "lipsharp/params.hpp"

namespace lipsharp::sharpfn {

using capacity::Bump;
using cubetree::CubeChain;
using cubetree::DyadicCube;
using cubetree::ParamSequence;
using lorentz::RadialProfile;
using num::Dyadic;
using num::Exp2;

/// A value together with the tree-resolution uncertainty: zero when locate
/// resolved the point, 2^{-k_{d+1}} at depth cap d (all deeper bumps are
/// shorter than that).
struct CertifiedValue {
    Exp2 value;
    Exp2 uncertainty;
    bool exact() const { return uncertainty.is_zero(); }
};

/// The assembled pathological function f: one capacity bump per selected
/// cube, plateau 2^{-k_n}, support inside I_Q, Lip-norm budget eps_n.
/// Bumps at one level are translates; the per-level prototype is memoized
/// (initialize-once, idempotent — safe for concurrent probes).
class SharpExample {
  public:
    SharpExample(ParamSequence params, double q_S);

    const ParamSequence& params() const { return params_; }
    double q_S() const { return q_S_; }
    const RadialProfile& profile() const { return profile_; }

    /// Level-n bump prototype centered at the origin.
    const Bump& level_bump(int n) const;

    /// Plateau height 2^{-k_n}.
    Exp2 plateau(int n) const { return Exp2::pow2(-params_.k(n)); }

  private:
    ParamSequence params_;
    double q_S_;
    RadialProfile profile_;
    mutable std::map<int, Bump> bumps_;
    mutable std::mutex mu_;
};

/// f(x) with certified uncertainty. InInner resolves to the exact bump value;
/// Escaped resolves to 0; Deep(d) reports 0 +- 2^{-k_{d+1}}.
CertifiedValue eval_f(const SharpExample& ex, const std::vector<Dyadic>& x, int max_depth);

/// One certified oscillation bound of the proof: at level n of an I-chain,
///   sup_{|y-x| < 2^{-l_n}} |f(y) - f(x)| / 2^{-l_n}  <=  2^{l_n - k_{n+1}}.
struct ProbeBound {
    int level = 0;
    std::int64_t radius_exp2 = 0;  // -l_n
    Exp2 bound;                    // 2^{l_n - k_{n+1}}
};

/// The bounds for n = 0..depth; strictly decreasing to 0 in strict mode,
/// certifying lip f = 0 along the chain's radius subsequence. Throws if the
/// chain is not a valid selected-cube prefix of the requested depth.
std::vector<ProbeBound> lip_probe(const SharpExample& ex, const CubeChain& chain, int depth);

/// Non-differentiability witness at chain level n: y in {a, b} (a = cube
/// center, b = snapped ray/boundary point) with
///   |f(x_rep) - f(y)| / |x_rep - y|  >=  2^{j_n/3} / (2 sqrt(N)),
/// where x_rep is the center of the level-(n+1) chain cube standing in for
/// the ideal I-point. All f-values are revalidated by uncertainty-0 eval_f
/// calls before the ratio is certified.
struct Witness {
    int level = 0;
    std::vector<Dyadic> x_rep;
    std::vector<Dyadic> y;
    bool y_is_center = true;
    Exp2 ratio;           // |f(x_rep) - f(y)| / |x_rep - y|, certified
    Exp2 certified_bound; // 2^{j_n/3} / (2 sqrt N)
    Exp2 f_x;
    Exp2 f_y;
};
Witness nondiff_witness(const SharpExample& ex, const CubeChain& chain, int level);

/// Sum_n card(Q_n) eps_n over the built generations, exactly 2^{-n} each by
/// the choice of eps_n; certifies ||lip f||_S <= 2.
struct BudgetReport {
    Dyadic total;          // exact sum of 2^{-n}
    bool within_two = true;
    std::vector<Exp2> per_level;  // card(Q_n) * eps_n as stored
};
BudgetReport lip_field_norm_budget(const SharpExample& ex);

/// Certified two-sided bound on sup_{B(x,r)} |f - f(x)|.
struct SupBounds {
    Exp2 lower;
    Exp2 upper;
};
SupBounds sup_on_ball(const SharpExample& ex, const std::vector<Dyadic>& x, const Dyadic& r,
                      int max_depth);

}  // namespace lipsharp::sharpfn

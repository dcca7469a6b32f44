#include "lipsharp/sharp_function.hpp"

#include <cmath>
#include <stdexcept>

namespace lipsharp::sharpfn {

using cubetree::child_cube;
using cubetree::is_selected_child;
using cubetree::locate;
using cubetree::Location;
using cubetree::resolve_chain;
using cubetree::root_cube;
using num::BigInt;

SharpExample::SharpExample(ParamSequence params, double q_S)
    : params_(std::move(params)), q_S_(q_S), profile_(lorentz::log_capacity_profile(params_.dim())) {
    if (!(q_S_ > 1.0) || !(q_S_ <= params_.dim()))
        throw std::invalid_argument("SharpExample: need 1 < q_S <= N (S = L^{N,q_S})");
}

const Bump& SharpExample::level_bump(int n) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = bumps_.find(n);
    if (it != bumps_.end()) return it->second;
    capacity::BumpSpec spec;
    spec.center.assign(params_.dim(), Dyadic(0));
    spec.eps = Exp2::pow2(-params_.l(n));  // support radius eps/2 = 2^{-l_n - 1}, inside I_Q
    spec.tau = Exp2::pow2(-params_.k(n));
    spec.N = params_.dim();
    spec.profile = profile_;
    spec.norm_budget = params_.eps(n);
    spec.q_S = q_S_;
    return bumps_.emplace(n, capacity::make_bump(spec)).first->second;
}

CertifiedValue eval_f(const SharpExample& ex, const std::vector<Dyadic>& x, int max_depth) {
    const auto loc = locate(x, ex.params(), max_depth);
    CertifiedValue out;
    switch (loc.kind) {
        case Location::Kind::InInner: {
            const DyadicCube q = resolve_chain(loc.chain, ex.params());
            std::vector<Dyadic> d(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - q.center[i];
            out.value = capacity::eval_bump(ex.level_bump(loc.level), d);
            break;
        }
        case Location::Kind::Escaped:
            break;  // f == 0 at x, exactly
        case Location::Kind::Deep:
            // Every unresolved bump below the cap has height <= 2^{-k_{d+1}}.
            out.uncertainty = Exp2::pow2(-ex.params().k(loc.level + 1));
            break;
    }
    return out;
}

std::vector<ProbeBound> lip_probe(const SharpExample& ex, const CubeChain& chain, int depth) {
    if (chain.depth() < depth)
        throw std::invalid_argument("lip_probe: not an I-candidate (chain shorter than depth)");
    resolve_chain(chain, ex.params());  // validates every offset
    std::vector<ProbeBound> out;
    out.reserve(depth + 1);
    for (int n = 0; n <= depth; ++n) {
        ProbeBound b;
        b.level = n;
        b.radius_exp2 = -ex.params().l(n);
        b.bound = Exp2::pow2(ex.params().l(n) - ex.params().k(n + 1));
        out.push_back(b);
    }
    return out;
}

namespace {

/// Extends the chain canonically by the minimal selected offset
/// (L, L, ..., L), L = 2^{j_{n+1}-l_n+1} + 1.
CubeChain extend_chain(const CubeChain& chain, const ParamSequence& p, int to_depth) {
    CubeChain c = chain;
    while (c.depth() < to_depth) {
        const int n = c.depth();
        const BigInt L = (BigInt(1) << static_cast<unsigned>(p.j(n + 1) - p.l(n) + 1)) + 1;
        std::vector<BigInt> off(p.dim(), L);
        if (!is_selected_child(n, off, p))
            throw std::logic_error("extend_chain: canonical offset not selected");
        c.offsets.push_back(off);
    }
    return c;
}

Exp2 euclid_dist(const std::vector<Dyadic>& a, const std::vector<Dyadic>& b) {
    std::vector<Dyadic> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    return num::l2_norm_sq(d).to_exp2().sqrt_nonneg();
}

}  // namespace

Witness nondiff_witness(const SharpExample& ex, const CubeChain& chain, int level) {
    const auto& p = ex.params();
    resolve_chain(chain, p);
    if (chain.depth() < level)
        throw std::invalid_argument("nondiff_witness: chain shorter than requested level");
    const CubeChain full = extend_chain(chain, p, level + 1);

    // a: center of the level-n cube; x_rep: center of the level-(n+1) cube.
    CubeChain prefix;
    prefix.offsets.assign(full.offsets.begin(), full.offsets.begin() + level);
    const DyadicCube Qn = resolve_chain(prefix, p);
    const DyadicCube Qn1 = child_cube(Qn, full.offsets[level], p);

    Witness w;
    w.level = level;
    w.x_rep = Qn1.center;

    // b: ray from a through x_rep to the boundary of Q_n, snapped inward to
    // the 2^{-j_{n+1}} grid. The dominant axis lands exactly on the face.
    const std::int64_t jn = p.j(level), jn1 = p.j(level + 1);
    std::vector<BigInt> m(p.dim());
    BigInt M = 0;
    for (int d = 0; d < p.dim(); ++d) {
        m[d] = ((Qn1.center[d] - Qn.center[d]) * Dyadic::pow2_pos(jn1)).floor();
        BigInt a = m[d] < 0 ? BigInt(-m[d]) : m[d];
        if (a > M) M = a;
    }
    std::vector<Dyadic> b(p.dim());
    const BigInt scale = BigInt(1) << static_cast<unsigned>(jn1 - jn);
    for (int d = 0; d < p.dim(); ++d) {
        const BigInt q = (scale * m[d]) / M;  // trunc toward zero = inward snap
        b[d] = Qn.center[d] + Dyadic(q, jn1);
    }

    const int eval_depth = level + 2;
    const CertifiedValue fx = eval_f(ex, w.x_rep, eval_depth);
    const CertifiedValue fa = eval_f(ex, Qn.center, eval_depth);
    const CertifiedValue fb = eval_f(ex, b, eval_depth);
    if (!fx.exact() || !fa.exact() || !fb.exact())
        throw std::logic_error("nondiff_witness: witness evaluation not exact");
    if (!(fa.value == ex.plateau(level)))
        throw std::logic_error("nondiff_witness: f(a) != plateau");
    if (!fb.value.is_zero()) throw std::logic_error("nondiff_witness: f(b) != 0");

    const Exp2 ratio_a = (fa.value - fx.value).abs() / euclid_dist(w.x_rep, Qn.center);
    const Exp2 ratio_b = (fx.value - fb.value).abs() / euclid_dist(w.x_rep, b);
    if (ratio_a >= ratio_b) {
        w.y = Qn.center;
        w.y_is_center = true;
        w.ratio = ratio_a;
        w.f_y = fa.value;
    } else {
        w.y = b;
        w.y_is_center = false;
        w.ratio = ratio_b;
        w.f_y = fb.value;
    }
    w.f_x = fx.value;
    w.certified_bound = Exp2::pow2(jn / 3) /
                        Exp2::from_double(2.0 * std::sqrt(static_cast<double>(p.dim())));
    return w;
}

BudgetReport lip_field_norm_budget(const SharpExample& ex) {
    const auto& p = ex.params();
    BudgetReport rep;
    rep.total = Dyadic(0);
    for (int n = 0; n <= p.n_max(); ++n) {
        // eps_n = 2^{-n} / card(Q_n) exactly, so card * eps_n = 2^{-n}.
        rep.total = rep.total + Dyadic::pow2_neg(n);
        const Exp2 card = Dyadic(p.cardinality(n), 0).to_exp2();
        rep.per_level.push_back(card * p.eps(n));
    }
    rep.within_two = rep.total <= Dyadic(2);
    return rep;
}

SupBounds sup_on_ball(const SharpExample& ex, const std::vector<Dyadic>& x, const Dyadic& r,
                      int max_depth) {
    if (r.sign() <= 0) throw std::invalid_argument("sup_on_ball: r > 0");
    const auto& p = ex.params();
    const auto loc = locate(x, p, max_depth);
    const CertifiedValue fx = eval_f(ex, x, max_depth);
    const Dyadic r2 = r * r;

    SupBounds out;
    // Lower bound: |f(c) - f(x)| over chain-cube centers inside the ball.
    DyadicCube q = root_cube(p);
    std::vector<DyadicCube> chain_cubes{q};
    for (const auto& off : loc.chain.offsets) {
        q = child_cube(q, off, p);
        chain_cubes.push_back(q);
    }
    for (const auto& cube : chain_cubes) {
        std::vector<Dyadic> d(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - cube.center[i];
        if (num::l2_norm_sq(d) <= r2) {
            const CertifiedValue fc = eval_f(ex, cube.center, max_depth);
            Exp2 diff = (fc.value - fx.value).abs() - fx.uncertainty - fc.uncertainty;
            if (diff.sign() > 0 && diff > out.lower) out.lower = diff;
        }
    }

    // Upper bound: tallest plateau among reachable structures (l-inf distances
    // understate Euclidean ones, so exclusion by them is sound).
    Exp2 upper;
    const int d_max = static_cast<int>(chain_cubes.size()) - 1;
    for (int n = 0; n <= d_max; ++n) {
        Dyadic dinf(0);
        for (int dd = 0; dd < p.dim(); ++dd) {
            const Dyadic a = (x[dd] - chain_cubes[n].center[dd]).abs();
            if (a > dinf) dinf = a;
        }
        const Dyadic gap = dinf - Dyadic::pow2_neg(p.l(n));  // distance to I_{Q_n}
        if (gap.sign() <= 0 || gap <= r) {
            const Exp2 tau = ex.plateau(n);
            if (tau > upper) upper = tau;
        }
    }
    // Everything below the deepest walked level lives inside the
    // selected-children annulus hull of the last chain cube.
    if (loc.kind != Location::Kind::InInner) {
        const int n = d_max;
        const DyadicCube& last = chain_cubes.back();
        Dyadic dinf(0);
        for (int dd = 0; dd < p.dim(); ++dd) {
            const Dyadic a = (x[dd] - last.center[dd]).abs();
            if (a > dinf) dinf = a;
        }
        const Dyadic child_half = Dyadic::pow2_neg(p.j(n + 1));
        const Dyadic inner_edge = Dyadic(2) * Dyadic::pow2_neg(p.l(n));
        const Dyadic outer_edge = Dyadic::pow2_neg(p.j(n)) - Dyadic::pow2_neg(p.l(n));
        (void)child_half;
        Dyadic gap(0);
        if (dinf < inner_edge) gap = inner_edge - dinf;
        if (dinf > outer_edge) gap = dinf - outer_edge;
        if (gap.sign() <= 0 || gap <= r) {
            const Exp2 tau = ex.plateau(n + 1);
            if (tau > upper) upper = tau;
        }
    }
    out.upper = upper + fx.uncertainty;
    if (out.lower > out.upper) out.lower = out.upper;
    return out;
}

}  // namespace lipsharp::sharpfn

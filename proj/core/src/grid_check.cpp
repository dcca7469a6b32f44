#include "lipsharp/grid_check.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lipsharp::gradcheck {

GridField::GridField(int dim, int nodes_per_axis) : dim_(dim), nodes_(nodes_per_axis) {
    if (dim_ < 1 || nodes_ < 2) throw std::invalid_argument("GridField: dim >= 1, nodes >= 2");
    std::size_t total = 1;
    for (int d = 0; d < dim_; ++d) total *= static_cast<std::size_t>(nodes_);
    values_.assign(total, 0.0);
}

std::vector<double> GridField::node_coords(std::size_t i) const {
    std::vector<double> x(dim_);
    for (int d = dim_ - 1; d >= 0; --d) {
        x[d] = -1.0 + h() * static_cast<double>(i % nodes_);
        i /= nodes_;
    }
    return x;
}

std::size_t GridField::index_of(const std::vector<int>& idx) const {
    std::size_t i = 0;
    for (int d = 0; d < dim_; ++d) {
        if (idx[d] < 0 || idx[d] >= nodes_) throw std::out_of_range("GridField::index_of");
        i = i * nodes_ + static_cast<std::size_t>(idx[d]);
    }
    return i;
}

double GridField::interpolate(const std::vector<double>& x) const {
    std::vector<int> base(dim_);
    std::vector<double> frac(dim_);
    for (int d = 0; d < dim_; ++d) {
        double t = (x[d] + 1.0) / h();
        t = std::clamp(t, 0.0, static_cast<double>(nodes_ - 1));
        int b = static_cast<int>(std::floor(t));
        if (b >= nodes_ - 1) b = nodes_ - 2;
        base[d] = b;
        frac[d] = t - b;
    }
    double acc = 0.0;
    const int corners = 1 << dim_;
    std::vector<int> idx(dim_);
    for (int c = 0; c < corners; ++c) {
        double w = 1.0;
        for (int d = 0; d < dim_; ++d) {
            const bool hi = (c >> d) & 1;
            idx[d] = base[d] + (hi ? 1 : 0);
            w *= hi ? frac[d] : 1.0 - frac[d];
        }
        if (w > 0.0) acc += w * values_[index_of(idx)];
    }
    return acc;
}

GridField GridField::sample(int dim, int nodes_per_axis,
                            const std::function<double(const std::vector<double>&)>& f) {
    GridField g(dim, nodes_per_axis);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = f(g.node_coords(i));
    return g;
}

lorentz::StepFunction GridField::to_step_function() const {
    std::vector<double> vals = values_;
    std::sort(vals.begin(), vals.end(), std::greater<double>());
    const double w = std::pow(2.0, dim_) / static_cast<double>(vals.size());
    std::vector<double> bp{0.0};
    std::vector<double> vv;
    for (double v : vals) {
        if (v <= 0.0) break;
        if (!vv.empty() && vv.back() == v) {
            bp.back() += w;
        } else {
            vv.push_back(v);
            bp.push_back(bp.back() + w);
        }
    }
    return lorentz::StepFunction(std::move(bp), std::move(vv), true);
}

GridField maximal_function(const GridField& g, double q, const std::vector<double>& radii) {
    if (radii.empty()) throw std::invalid_argument("maximal_function: empty radii set");
    if (!(q >= 1.0)) throw std::invalid_argument("maximal_function: q >= 1");
    const double diam = 2.0 * std::sqrt(static_cast<double>(g.dim()));
    for (double r : radii)
        if (!(r > 0.0) || r > diam)
            throw std::invalid_argument("maximal_function: radii must be in (0, diam]");

    // Precompute integer-offset stencils per radius.
    const double h = g.h();
    std::vector<std::vector<std::vector<int>>> stencils;
    for (double r : radii) {
        const int reach = static_cast<int>(std::floor(r / h));
        std::vector<std::vector<int>> st;
        std::vector<int> off(g.dim(), -reach);
        while (true) {
            double d2 = 0.0;
            for (int d = 0; d < g.dim(); ++d) d2 += static_cast<double>(off[d]) * off[d];
            if (d2 * h * h <= r * r) st.push_back(off);
            int d = g.dim() - 1;
            while (d >= 0 && off[d] == reach) {
                off[d] = -reach;
                --d;
            }
            if (d < 0) break;
            ++off[d];
        }
        stencils.push_back(std::move(st));
    }

    GridField out(g.dim(), g.nodes_per_axis());
    std::vector<int> idx(g.dim()), nb(g.dim());
    for (std::size_t i = 0; i < g.size(); ++i) {
        std::size_t rem = i;
        for (int d = g.dim() - 1; d >= 0; --d) {
            idx[d] = static_cast<int>(rem % g.nodes_per_axis());
            rem /= g.nodes_per_axis();
        }
        double best = g[i];  // one-node ball: M_q(g) >= g
        for (const auto& st : stencils) {
            double acc = 0.0;
            std::size_t cnt = 0;
            for (const auto& off : st) {
                bool ok = true;
                for (int d = 0; d < g.dim(); ++d) {
                    nb[d] = idx[d] + off[d];
                    if (nb[d] < 0 || nb[d] >= g.nodes_per_axis()) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) continue;
                acc += std::pow(g[g.index_of(nb)], q);
                ++cnt;
            }
            if (cnt > 0) {
                const double mean = std::pow(acc / static_cast<double>(cnt), 1.0 / q);
                if (mean > best) best = mean;
            }
        }
        out[i] = best;
    }
    return out;
}

PolyCurve::PolyCurve(std::vector<std::vector<double>> pts) : pts_(std::move(pts)) {
    if (pts_.size() < 2) throw std::invalid_argument("PolyCurve: need at least two points");
    cum_.push_back(0.0);
    for (std::size_t i = 1; i < pts_.size(); ++i) {
        double d2 = 0.0;
        for (std::size_t d = 0; d < pts_[i].size(); ++d) {
            const double dd = pts_[i][d] - pts_[i - 1][d];
            d2 += dd * dd;
        }
        const double seg = std::sqrt(d2);
        if (!(seg > 0.0)) throw std::invalid_argument("PolyCurve: consecutive points must differ");
        length_ += seg;
        cum_.push_back(length_);
    }
}

std::vector<double> PolyCurve::at(double s) const {
    s = std::clamp(s, 0.0, length_);
    auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
    std::size_t k = static_cast<std::size_t>(it - cum_.begin());
    if (k == 0) k = 1;
    if (k >= pts_.size()) k = pts_.size() - 1;
    const double t = (s - cum_[k - 1]) / (cum_[k] - cum_[k - 1]);
    std::vector<double> x(pts_[k].size());
    for (std::size_t d = 0; d < x.size(); ++d)
        x[d] = pts_[k - 1][d] + t * (pts_[k][d] - pts_[k - 1][d]);
    return x;
}

namespace {

/// ∫ over [s0, s1] of g(gamma(s)) ds, composite midpoint with refinement
/// until successive estimates differ by < 1e-9 relative.
double curve_integral(const GridField& g, const PolyCurve& c, double s0, double s1) {
    double prev = 0.0;
    for (int m = 8; m <= (1 << 22); m *= 2) {
        const double step = (s1 - s0) / m;
        double acc = 0.0;
        for (int i = 0; i < m; ++i) acc += g.interpolate(c.at(s0 + (i + 0.5) * step));
        acc *= step;
        if (m > 8 && std::fabs(acc - prev) <= 1e-9 * std::max(1.0, std::fabs(acc))) return acc;
        prev = acc;
    }
    return prev;
}

}  // namespace

ChainReport chain_inequality(const std::function<double(const std::vector<double>&)>& f,
                             const GridField& g, const PolyCurve& curve, int segments) {
    if (segments < 2) throw std::invalid_argument("chain_inequality: need >= 2 segments");
    ChainReport rep;
    rep.segments = segments;
    const double L = curve.length();
    rep.lhs = std::fabs(f(curve.at(0.0)) - f(curve.at(L)));
    rep.curve_integral = curve_integral(g, curve, 0.0, L);
    if (!std::isfinite(rep.curve_integral)) {
        rep.vacuous = true;
        rep.holds = true;
        return rep;
    }
    rep.rhs = 4.0 * rep.curve_integral;

    // Per-segment averages; the telescoped estimate sum (2L/n)(avg_k + avg_{k+1})
    // converges to 4 ∫ as n grows.
    std::vector<double> avg(segments);
    const double seglen = L / segments;
    for (int k = 0; k < segments; ++k)
        avg[k] = curve_integral(g, curve, k * seglen, (k + 1) * seglen) / seglen;
    double tel = 0.0;
    for (int k = 0; k + 1 < segments; ++k) tel += (2.0 * L / segments) * (avg[k] + avg[k + 1]);
    rep.telescope_bound = tel;
    rep.slack = rep.rhs - rep.lhs;
    rep.holds = rep.lhs <= rep.rhs * (1.0 + 1e-12) + 1e-15;
    return rep;
}

std::vector<PairViolation> hajlasz_pair_check(
    const std::function<double(const std::vector<double>&)>& f, const GridField& M,
    const std::vector<std::pair<std::size_t, std::size_t>>& pairs, double C) {
    std::vector<PairViolation> out;
    for (const auto& [i, j] : pairs) {
        const auto xi = M.node_coords(i), xj = M.node_coords(j);
        double d2 = 0.0;
        for (std::size_t d = 0; d < xi.size(); ++d) d2 += (xi[d] - xj[d]) * (xi[d] - xj[d]);
        const double dist = std::sqrt(d2);
        const double lhs = std::fabs(f(xi) - f(xj));
        const double rhs = C * dist * (M[i] + M[j]);
        if (lhs > rhs) out.push_back({i, j, lhs, rhs});
    }
    return out;
}

double minimal_hajlasz_constant(const std::function<double(const std::vector<double>&)>& f,
                                const GridField& M,
                                const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    double cmin = 0.0;
    for (const auto& [i, j] : pairs) {
        const auto xi = M.node_coords(i), xj = M.node_coords(j);
        double d2 = 0.0;
        for (std::size_t d = 0; d < xi.size(); ++d) d2 += (xi[d] - xj[d]) * (xi[d] - xj[d]);
        const double dist = std::sqrt(d2);
        const double lhs = std::fabs(f(xi) - f(xj));
        const double den = dist * (M[i] + M[j]);
        if (lhs > 0.0 && den > 0.0) cmin = std::max(cmin, lhs / den);
    }
    return cmin;
}

}  // namespace lipsharp::gradcheck

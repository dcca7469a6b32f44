#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "lipsharp/step_function.hpp"

namespace lipsharp::gradcheck {

/// Scalar field sampled on a regular grid over [-1,1]^N (nodes at
/// -1 + i * h, h = 2/(nodes_per_axis - 1)). Gradient-type fields are
/// finite and nonnegative.
class GridField {
  public:
    GridField(int dim, int nodes_per_axis);

    int dim() const { return dim_; }
    int nodes_per_axis() const { return nodes_; }
    double h() const { return 2.0 / (nodes_ - 1); }
    std::size_t size() const { return values_.size(); }

    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    std::vector<double> node_coords(std::size_t i) const;
    std::size_t index_of(const std::vector<int>& idx) const;

    /// Multilinear interpolation at a point of [-1,1]^N.
    double interpolate(const std::vector<double>& x) const;

    /// Fill from a function of the node coordinates.
    static GridField sample(int dim, int nodes_per_axis,
                            const std::function<double(const std::vector<double>&)>& f);

    /// Step function equimeasurable with the field under the uniform node
    /// weight 2^N / #nodes (the documented discretization of [-1,1]^N).
    lorentz::StepFunction to_step_function() const;

    const std::vector<double>& values() const { return values_; }

  private:
    int dim_;
    int nodes_;
    std::vector<double> values_;
};

/// Perturbed maximal function: M_q(g)(x) = max over the given radii of the
/// q-power mean of g over the grid-discretized ball. The one-node "ball"
/// (radius 0) is always included, so M_q(g) >= g at every node.
GridField maximal_function(const GridField& g, double q, const std::vector<double>& radii);

/// An arc-length parameterized polygonal curve in [-1,1]^N.
class PolyCurve {
  public:
    explicit PolyCurve(std::vector<std::vector<double>> pts);
    double length() const { return length_; }
    std::vector<double> at(double s) const;  // s in [0, length]
    const std::vector<std::vector<double>>& points() const { return pts_; }

  private:
    std::vector<std::vector<double>> pts_;
    std::vector<double> cum_;
    double length_ = 0.0;
};

struct ChainReport {
    double lhs = 0.0;              // |f(gamma(0)) - f(gamma(L))|
    double curve_integral = 0.0;   // ∫_gamma g ds (refined midpoint rule)
    double rhs = 0.0;              // 4 ∫_gamma g ds
    double telescope_bound = 0.0;  // sum (2L/n)(avg_k + avg_{k+1}), the n-step estimate
    double slack = 0.0;            // rhs - lhs
    int segments = 0;
    bool vacuous = false;          // infinite curve integral: trivially satisfied
    bool holds = false;            // lhs <= rhs
};

/// Reproduces the segment-partition chaining estimate: splits [0, L] into n
/// equal pieces, picks per-piece points of (nearly) minimal g, telescopes,
/// and checks |f(gamma(0)) - f(gamma(L))| <= 4 ∫_gamma g ds.
ChainReport chain_inequality(const std::function<double(const std::vector<double>&)>& f,
                             const GridField& g, const PolyCurve& curve, int segments);

/// Pairs violating |f(x) - f(y)| <= C |x - y| (M(x) + M(y)) over node pairs.
struct PairViolation {
    std::size_t i = 0, j = 0;
    double lhs = 0.0, rhs = 0.0;
};
std::vector<PairViolation> hajlasz_pair_check(
    const std::function<double(const std::vector<double>&)>& f, const GridField& M,
    const std::vector<std::pair<std::size_t, std::size_t>>& pairs, double C);

/// Smallest C passing hajlasz_pair_check on the given pairs.
double minimal_hajlasz_constant(const std::function<double(const std::vector<double>&)>& f,
                                const GridField& M,
                                const std::vector<std::pair<std::size_t, std::size_t>>& pairs);

}  // namespace lipsharp::gradcheck

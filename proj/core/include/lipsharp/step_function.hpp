#pragma once

#include <vector>

#include "lipsharp/exp2.hpp"

namespace lipsharp::lorentz {

/// A nonnegative step function on [0, inf): value values[i] on
/// [breakpoints[i], breakpoints[i+1]), 0 beyond the last breakpoint.
/// Pieces are closed on the left, open on the right, matching the
/// right-continuity convention of f*(t) = inf{alpha : omega(alpha) <= t}.
class StepFunction {
  public:
    /// breakpoints strictly increasing starting at 0; values one per interval.
    StepFunction(std::vector<double> breakpoints, std::vector<double> values,
                 bool rearranged = false);

    /// f == 0.
    static StepFunction zero() { return StepFunction({0.0}, {}, true); }
    /// Indicator of a set of measure m (canonically [0, m)).
    static StepFunction indicator(double m) { return StepFunction({0.0, m}, {1.0}, true); }

    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<double>& values() const { return values_; }
    bool rearranged() const { return rearranged_; }
    std::size_t pieces() const { return values_.size(); }

    double operator()(double t) const;

    /// Measure of {t : f(t) > alpha}; right-continuous and nonincreasing in alpha.
    double distribution(double alpha) const;

    /// Largest breakpoint (support is contained in [0, end)).
    double end() const { return breakpoints_.back(); }

    StepFunction scaled(double c) const;

    friend bool operator==(const StepFunction& a, const StepFunction& b) {
        return a.breakpoints_ == b.breakpoints_ && a.values_ == b.values_;
    }

  private:
    std::vector<double> breakpoints_;
    std::vector<double> values_;
    bool rearranged_ = false;
};

/// Nonincreasing rearrangement f*. Output is canonical: values strictly
/// decreasing (equal-valued pieces merged), zero pieces dropped, flagged
/// rearranged. Equimeasurable with the input; idempotent on canonical inputs.
StepFunction rearrangement(const StepFunction& f);

/// distribution_function as a free operation (alpha >= 0 required).
double distribution_function(const StepFunction& f, double alpha);

}  // namespace lipsharp::lorentz

#include "lipsharp/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lipsharp::lorentz {

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<double> values,
                           bool rearranged)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)), rearranged_(rearranged) {
    if (breakpoints_.empty() || breakpoints_.front() != 0.0)
        throw std::invalid_argument("StepFunction: breakpoints must start at 0");
    if (values_.size() + 1 != breakpoints_.size())
        throw std::invalid_argument("StepFunction: need one value per interval");
    for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
        if (!(breakpoints_[i] > breakpoints_[i - 1]) || !std::isfinite(breakpoints_[i]))
            throw std::invalid_argument("StepFunction: breakpoints must be strictly increasing");
    }
    for (double v : values_) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("StepFunction: values must be finite and nonnegative");
    }
    if (rearranged_) {
        for (std::size_t i = 1; i < values_.size(); ++i)
            if (values_[i] > values_[i - 1])
                throw std::invalid_argument("StepFunction: rearranged flag on increasing values");
    }
}

double StepFunction::operator()(double t) const {
    if (t < 0.0) throw std::invalid_argument("StepFunction: negative argument");
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
    const auto idx = static_cast<std::size_t>(it - breakpoints_.begin());
    if (idx == 0 || idx > values_.size()) return 0.0;  // t >= last breakpoint
    return values_[idx - 1];
}

double StepFunction::distribution(double alpha) const {
    if (alpha < 0.0) throw std::invalid_argument("distribution: alpha must be >= 0");
    // Sum qualifying lengths in stable value-descending order — the same
    // order the rearrangement accumulates its breakpoints in — so that
    // equimeasurability holds bit-exactly, not just up to summation order.
    std::vector<std::pair<double, double>> pieces;
    pieces.reserve(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (values_[i] > alpha)
            pieces.emplace_back(values_[i], breakpoints_[i + 1] - breakpoints_[i]);
    std::stable_sort(pieces.begin(), pieces.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    double total = 0.0;
    for (const auto& [v, len] : pieces) total += len;
    return total;
}

StepFunction StepFunction::scaled(double c) const {
    if (c < 0.0) throw std::invalid_argument("scaled: nonnegative factors only");
    std::vector<double> v = values_;
    for (double& x : v) x *= c;
    return StepFunction(breakpoints_, std::move(v), rearranged_);
}

double distribution_function(const StepFunction& f, double alpha) { return f.distribution(alpha); }

StepFunction rearrangement(const StepFunction& f) {
    std::vector<std::pair<double, double>> pieces;  // (value, length), value > 0
    pieces.reserve(f.pieces());
    for (std::size_t i = 0; i < f.pieces(); ++i) {
        const double v = f.values()[i];
        if (v > 0.0) pieces.emplace_back(v, f.breakpoints()[i + 1] - f.breakpoints()[i]);
    }
    std::stable_sort(pieces.begin(), pieces.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<double> bp{0.0};
    std::vector<double> vals;
    for (const auto& [v, len] : pieces) {
        if (!vals.empty() && vals.back() == v) {
            bp.back() += len;  // merge equal-valued pieces
        } else {
            vals.push_back(v);
            bp.push_back(bp.back() + len);
        }
    }
    return StepFunction(std::move(bp), std::move(vals), true);
}

}  // namespace lipsharp::lorentz

#pragma once

#include <cmath>
#include <cstddef>
#include <algorithm>
#include <functional>
#include <vector>

namespace lipsharp::num {

struct QuadResult {
    double value = 0.0;
    double err = 0.0;
    bool converged = false;
    std::size_t evals = 0;
};

/// Adaptive Simpson with Richardson correction. Absolute tolerance per call;
/// integrands here are monotone or piecewise-smooth, so bisection converges
/// predictably.
template <class F>
QuadResult adaptive_simpson(F&& f, double a, double b, double abs_tol = 1e-9, int max_depth = 52) {
    QuadResult out;
    if (!(b > a)) {
        out.converged = true;
        return out;
    }
    struct Frame {
        double a, b, fa, fm, fb, whole, tol;
        int depth;
    };
    auto simpson = [](double a_, double b_, double fa_, double fm_, double fb_) {
        return (b_ - a_) / 6.0 * (fa_ + 4.0 * fm_ + fb_);
    };
    const double m0 = 0.5 * (a + b);
    double fa = f(a), fm = f(m0), fb = f(b);
    out.evals = 3;
    std::vector<Frame> stack;
    stack.push_back({a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), abs_tol, 0});
    bool ok = true;
    while (!stack.empty()) {
        Frame fr = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (fr.a + fr.b);
        const double lm = 0.5 * (fr.a + mid), rm = 0.5 * (mid + fr.b);
        const double flm = f(lm), frm = f(rm);
        out.evals += 2;
        const double left = simpson(fr.a, mid, fr.fa, flm, fr.fm);
        const double right = simpson(mid, fr.b, fr.fm, frm, fr.fb);
        const double delta = left + right - fr.whole;
        if (fr.depth >= max_depth || std::fabs(delta) <= 15.0 * fr.tol) {
            out.value += left + right + delta / 15.0;
            out.err += std::fabs(delta) / 15.0;
            if (fr.depth >= max_depth && std::fabs(delta) > 15.0 * fr.tol) ok = false;
            continue;
        }
        // keep the per-panel tolerance above what doubles can resolve
        const double child_tol = std::max(fr.tol * 0.5, 1e-17 * std::fabs(fr.whole));
        stack.push_back({fr.a, mid, fr.fa, flm, fr.fm, left, child_tol, fr.depth + 1});
        stack.push_back({mid, fr.b, fr.fm, frm, fr.fb, right, child_tol, fr.depth + 1});
    }
    // depth-capped panels are fine if the accumulated error estimate still
    // meets the requested tolerance
    out.converged = ok || out.err <= abs_tol;
    return out;
}

}  // namespace lipsharp::num

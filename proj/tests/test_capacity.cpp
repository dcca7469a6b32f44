#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "lipsharp/capacity.hpp"
#include "lipsharp/quadrature.hpp"

using namespace lipsharp::capacity;
using lipsharp::lorentz::constant_profile;
using lipsharp::lorentz::log_capacity_profile;
using lipsharp::num::Dyadic;
using lipsharp::num::Exp2;

namespace {

/// Simple fixed-resolution Simpson oracle, independent of the adaptive engine.
double simpson_oracle(const std::function<double(double)>& f, double a, double b, int n) {
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + (b - a) * i / n);
    return acc * (b - a) / (3.0 * n);
}

BumpSpec acceptance_spec() {
    BumpSpec spec;
    spec.center = {Dyadic(0), Dyadic(0)};
    spec.eps = Exp2::from_double(0.1);
    spec.tau = Exp2::from_double(1.0);
    spec.N = 2;
    spec.profile = log_capacity_profile(2);
    spec.norm_budget = Exp2::from_double(0.05);
    spec.q_S = 2.0;
    return spec;
}

}  // namespace

TEST_CASE("u_value closed forms and endpoints") {
    const auto c1 = constant_profile(1.0, 1.0);
    // u(r) = 2(1 - sqrt(r)) for g* == 1, N = 2
    const auto u25 = u_value(c1, 2, 0.25);
    CHECK(u25.finite());
    CHECK(u25.value == doctest::Approx(1.0).epsilon(1e-9));
    const auto u0 = u_value(c1, 2, 0.0);
    CHECK(u0.finite());
    CHECK(u0.value == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(u_value(c1, 2, 1.0).value == 0.0);  // empty integral at r = m_K

    // quadrature path (hints stripped) agrees
    auto stripped = c1;
    stripped.u_closed_lninv = nullptr;
    const auto uq = u_value(stripped, 2, 0.25);
    CHECK(uq.finite());
    CHECK(uq.value == doctest::Approx(1.0).epsilon(1e-7));
    const auto uq0 = u_value(stripped, 2, 0.0);
    CHECK(uq0.finite());
    CHECK(uq0.value == doctest::Approx(2.0).epsilon(1e-5));

    // log profile: u(r) = log log(e/r), any N; u(0) divergent
    const auto lg = log_capacity_profile(2);
    const auto ur = u_value(lg, 2, 0.1);
    CHECK(ur.value == doctest::Approx(std::log(std::log(std::exp(1.0) / 0.1))).epsilon(1e-12));
    CHECK(u_value(lg, 2, 0.0).divergent());
    const auto lg3 = log_capacity_profile(3);
    CHECK(u_value(lg3, 3, 0.1).value == doctest::Approx(ur.value).epsilon(1e-12));

    CHECK_THROWS(u_value(lg, 2, -0.1));
    CHECK_THROWS(u_value(lg, 2, 1.5));
}

TEST_CASE("make_bump: golden acceptance bump") {
    const Bump b = make_bump(acceptance_spec());

    // frozen from the monotone squaring search (first passing step)
    CHECK(b.search_steps == 42);
    CHECK(b.log2_delta == doctest::Approx(-2.34061e13).epsilon(1e-4));
    CHECK(b.lambda.to_double() == doctest::Approx(0.0340776).epsilon(1e-4));
    CHECK(b.u1 == doctest::Approx(1.7658833).epsilon(1e-6));
    CHECK(b.C_N == doctest::Approx(2.0 * std::sqrt(M_PI)).epsilon(1e-12));

    // continuity of lambda u - Lambda in u-space: lambda (u0 - u1) = 1
    const double cont = (b.lambda * (b.u0 - Exp2::from_double(b.u1))).to_double();
    CHECK(std::fabs(cont - 1.0) <= 1e-9);
    // boundary value at eps/2: lambda u1 - Lambda = 0
    CHECK(std::fabs((b.lambda * Exp2::from_double(b.u1) - b.Lambda).to_double()) <= 1e-9);

    // achieved norm within budget, re-verified post-construction
    CHECK(b.lip_norm.to_double() <= 0.05);
    CHECK(verify_bump_norm(b).to_double() <= 0.05);

    // independent Simpson oracle on the annulus (delta far below range, so
    // the lower endpoint contributes nothing at double precision)
    const auto& g = b.spec.profile;
    const double t_eps = M_PI * 0.05 * 0.05;
    const double lam = b.lambda.to_double();
    const double integral = simpson_oracle(
        [&](double t) { return std::pow(g.eval(t), 2.0); }, 1e-6, t_eps, 200000);
    const double head = 1.0 / (1.0 + std::log(1e6));  // int_0^h g*^2 = 1/ln(e/h)
    const double oracle_norm = b.C_N * lam * std::sqrt(integral + head);
    CHECK(oracle_norm <= 0.05);
    CHECK(oracle_norm == doctest::Approx(b.lip_norm.to_double()).epsilon(1e-4));
}

TEST_CASE("make_bump: tau = 0 and error cases") {
    auto spec = acceptance_spec();
    spec.tau = Exp2{};
    const Bump zb = make_bump(spec);
    CHECK(zb.zero());
    CHECK(eval_bump(zb, {Dyadic(0), Dyadic(0)}).is_zero());
    CHECK(eval_bump(zb, {Dyadic::from_double(0.01), Dyadic(0)}).is_zero());
    CHECK(bump_lip(zb, {Dyadic::from_double(0.01), Dyadic(0)}).is_zero());

    // finite u(0): the capacity of a point is positive, tight budgets fail
    auto bad = acceptance_spec();
    bad.profile = constant_profile(1.0, 1.0);
    bad.norm_budget = Exp2::from_double(0.05);
    CHECK_THROWS_AS(make_bump(bad), CapacityError);
}

TEST_CASE("constant-profile bump with loose budget: float-exact boundaries") {
    BumpSpec spec;
    spec.center = {Dyadic(0), Dyadic(0)};
    spec.eps = Exp2::from_double(0.4);
    spec.tau = Exp2::from_double(1.0);
    spec.N = 2;
    spec.profile = constant_profile(1.0, 1.0);
    spec.norm_budget = Exp2::from_double(10.0);  // loose: passes at delta = eps/4
    spec.q_S = 2.0;
    const Bump b = make_bump(spec);
    CHECK(b.search_steps == 0);
    const double delta = std::exp2(b.log2_delta);
    CHECK(delta == doctest::Approx(0.1).epsilon(1e-12));

    // value continuity at |x| = delta and eps/2 within 1e-9
    const double vd = eval_bump_radial(b, delta);
    CHECK(std::fabs(vd - 1.0) <= 1e-9);
    const double ve = eval_bump_radial(b, 0.2);
    CHECK(std::fabs(ve) <= 1e-9);
    CHECK(eval_bump_radial(b, 0.2000001) == 0.0);
    CHECK(eval_bump_radial(b, 0.0) == 1.0);

    // inside the plateau the Lip field vanishes
    CHECK(bump_lip_radial(b, 0.5 * delta) == 0.0);
    CHECK(bump_lip_radial(b, 0.21) == 0.0);
    CHECK(bump_lip_radial(b, 0.15) > 0.0);

    // radial monotonicity of the value
    double prev = 1.0;
    for (double r = 0.0; r <= 0.25; r += 0.001) {
        const double v = eval_bump_radial(b, r);
        CHECK(v <= prev + 1e-12);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        prev = v;
    }
}

TEST_CASE("bump_lip matches centered finite differences of eval_bump") {
    const Bump b = make_bump(acceptance_spec());
    // 50 annulus radii in [0.2 eps, 0.49 eps] (well inside the float-visible annulus)
    for (int i = 0; i < 50; ++i) {
        const double r = 0.02 + 0.029 * i / 49.0;
        const double h = r * 1e-6;
        const double fd =
            (eval_bump_radial(b, r + h) - eval_bump_radial(b, r - h)) / (2.0 * h);
        const double lip = bump_lip_radial(b, r);
        CHECK(std::fabs(-fd - lip) <= 1e-4 * lip);
    }
}

TEST_CASE("slope consistency along sampled segments") {
    const Bump b = make_bump(acceptance_spec());
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> coord(-0.06, 0.06);
    for (int trial = 0; trial < 200; ++trial) {
        const double r1 = std::fabs(coord(rng)), r2 = std::fabs(coord(rng));
        const double lo = std::min(r1, r2), hi = std::max(r1, r2);
        if (hi - lo < 1e-6) continue;
        // sup of the radial Lip field on [lo, hi]: field is decreasing in r
        const double sup_lip = bump_lip_radial(b, std::max(lo, 1e-9));
        const double dv = std::fabs(eval_bump_radial(b, hi) - eval_bump_radial(b, lo));
        CHECK(dv <= sup_lip * (hi - lo) * (1.0 + 1e-9) + 1e-15);
    }
}

TEST_CASE("delta-limit: shrinking budgets never increase lambda (log profile)") {
    double prev_lambda = 1e9;
    for (double budget : {0.05, 0.025, 0.0125, 0.00625}) {
        auto spec = acceptance_spec();
        spec.norm_budget = Exp2::from_double(budget);
        const Bump b = make_bump(spec);
        const double lam = b.lambda.to_double();
        CHECK(lam <= prev_lambda);
        CHECK(b.lip_norm.to_double() <= budget);
        prev_lambda = lam;
    }
}

TEST_CASE("deep budgets: direct u-space targeting stays consistent") {
    auto spec = acceptance_spec();
    spec.tau = Exp2::pow2(-60);                      // level-2 plateau
    spec.eps = Exp2::pow2(-334);                     // level-2 inner cube half-side
    spec.norm_budget = Exp2::pow2(-182);             // ~ eps_2
    const Bump b = make_bump(spec);
    CHECK(b.search_steps == -1);
    CHECK(b.u0.log2_abs() > 100.0);  // u0 ~ 2^{121}
    // lambda (u0 - u1) = 1 in u-space
    const double cont = (b.lambda * (b.u0 - Exp2::from_double(b.u1))).to_double();
    CHECK(std::fabs(cont - 1.0) <= 1e-9);
    CHECK(b.lip_norm <= spec.norm_budget);
    CHECK(verify_bump_norm(b) <= spec.norm_budget);
    // plateau at the exact center; zero beyond eps/2; tiny positive between
    CHECK(eval_bump(b, {Dyadic(0), Dyadic(0)}) == Exp2::pow2(-60));
    const std::vector<Dyadic> far{Dyadic::pow2_neg(330), Dyadic(0)};
    CHECK(eval_bump(b, far).is_zero());
    const std::vector<Dyadic> mid{Dyadic::pow2_neg(336), Dyadic(0)};
    const Exp2 v = eval_bump(b, mid);
    CHECK(v.sign() >= 0);
    CHECK(v < Exp2::pow2(-60));
}

#include <benchmark/benchmark.h>

#include <random>

#include "lipsharp/grid_check.hpp"
#include "lipsharp/sharp_function.hpp"

using namespace lipsharp;
using num::Dyadic;
using num::Exp2;

namespace {

lorentz::StepFunction random_step(std::mt19937_64& rng, int pieces) {
    std::uniform_real_distribution<double> len(0.05, 2.0), val(0.0, 5.0);
    std::vector<double> bp{0.0}, vals;
    for (int i = 0; i < pieces; ++i) {
        bp.push_back(bp.back() + len(rng));
        vals.push_back(val(rng));
    }
    return lorentz::StepFunction(bp, vals);
}

void BM_lorentz_norm_step(benchmark::State& state) {
    std::mt19937_64 rng(1);
    const auto f = random_step(rng, static_cast<int>(state.range(0)));
    const lorentz::LorentzIndex idx(2.0, 1.5);
    for (auto _ : state) benchmark::DoNotOptimize(lorentz::lorentz_norm(f, idx).value);
}
BENCHMARK(BM_lorentz_norm_step)->Arg(8)->Arg(64)->Arg(512);

void BM_rearrangement(benchmark::State& state) {
    std::mt19937_64 rng(2);
    const auto f = random_step(rng, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(lorentz::rearrangement(f).pieces());
}
BENCHMARK(BM_rearrangement)->Arg(64)->Arg(4096);

void BM_children_count_strict(benchmark::State& state) {
    const auto p = cubetree::ParamSequence::default_strict(2);
    const int level = static_cast<int>(state.range(0));
    for (auto _ : state) {
        cubetree::ParamSequence fresh = p;
        benchmark::DoNotOptimize(fresh.children_per_cube(level).backend().size());
    }
}
BENCHMARK(BM_children_count_strict)->Arg(0)->Arg(2);

void BM_locate_strict_depth3(benchmark::State& state) {
    const auto p = cubetree::ParamSequence::default_strict(2);
    std::mt19937_64 rng(3);
    const auto chain = cubetree::random_selected_chain(p, 3, rng);
    const auto q = cubetree::resolve_chain(chain, p);
    for (auto _ : state) benchmark::DoNotOptimize(cubetree::locate(q.center, p, 3).level);
}
BENCHMARK(BM_locate_strict_depth3);

void BM_eval_f_deep(benchmark::State& state) {
    static const sharpfn::SharpExample ex(cubetree::ParamSequence::default_strict(2), 2.0);
    std::mt19937_64 rng(4);
    const auto chain = cubetree::random_selected_chain(ex.params(), 3, rng);
    const auto q = cubetree::resolve_chain(chain, ex.params());
    (void)ex.level_bump(3);  // prebuild the cache
    for (auto _ : state) benchmark::DoNotOptimize(sharpfn::eval_f(ex, q.center, 3).value.m);
}
BENCHMARK(BM_eval_f_deep);

void BM_maximal_function(benchmark::State& state) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> val(0.0, 3.0);
    gradcheck::GridField g(2, static_cast<int>(state.range(0)));
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = val(rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(gradcheck::maximal_function(g, 2.0, {0.1, 0.3})[0]);
}
BENCHMARK(BM_maximal_function)->Arg(17)->Arg(33);

void BM_make_bump_acceptance(benchmark::State& state) {
    capacity::BumpSpec spec;
    spec.center = {Dyadic(0), Dyadic(0)};
    spec.eps = Exp2::from_double(0.1);
    spec.tau = Exp2::from_double(1.0);
    spec.N = 2;
    spec.profile = lorentz::log_capacity_profile(2);
    spec.norm_budget = Exp2::from_double(0.05);
    spec.q_S = 2.0;
    for (auto _ : state) benchmark::DoNotOptimize(capacity::make_bump(spec).search_steps);
}
BENCHMARK(BM_make_bump_acceptance);

}  // namespace

BENCHMARK_MAIN();

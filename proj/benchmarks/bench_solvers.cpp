#include <benchmark/benchmark.h>

#include "meissner/interior.hpp"
#include "meissner/slab.hpp"

using namespace meissner;

static void BM_SlabOracleFull(benchmark::State& state) {
    SlabProblem p;
    p.lambda = 0.1;
    p.kappa = 50.0;
    p.b = 0.3;
    p.n = static_cast<int>(state.range(0));
    p.L = 1.2;
    for (auto _ : state) benchmark::DoNotOptimize(solve_full_ode(p));
}
BENCHMARK(BM_SlabOracleFull)->Arg(600)->Arg(2400)->Unit(benchmark::kMillisecond);

static void BM_LimitSolveDegenerate(benchmark::State& state) {
    GLParameters params;
    params.lambda = 0.1;
    params.kappa = std::numeric_limits<double>::infinity();
    auto g = slab_box(static_cast<int>(state.range(0)), 1.2);
    auto data = BoundaryData::slab_uniform(g, -0.4, 0.0);
    for (auto _ : state) benchmark::DoNotOptimize(solve_limit_H(params, data, g));
}
BENCHMARK(BM_LimitSolveDegenerate)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

static void BM_FullSolveBox(benchmark::State& state) {
    GLParameters params;
    params.lambda = 0.1;
    params.kappa = 20.0;
    int n = static_cast<int>(state.range(0));
    auto g = box_grid(n, n, 4 * n, 0.4, 0.4, 0.8);
    auto data = BoundaryData::slab_uniform(g, -0.3, 0.0);
    for (auto _ : state) benchmark::DoNotOptimize(solve_full_FH(params, data, g));
}
BENCHMARK(BM_FullSolveBox)->Arg(6)->Unit(benchmark::kMillisecond);

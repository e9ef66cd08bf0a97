#include <benchmark/benchmark.h>

#include "meissner/operators.hpp"

using namespace meissner;

namespace {

VectorField random_edges(const StaggeredGrid& g, unsigned seed) {
    VectorField e(g, Placement::Edge);
    unsigned s = seed;
    for (int d = 0; d < 3; ++d)
        for (auto& v : e.comp(d)) {
            s = s * 1664525u + 1013904223u;
            v = static_cast<double>(s >> 8) / static_cast<double>(1u << 24) - 0.5;
        }
    return e;
}

}  // namespace

static void BM_Curl(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    auto g = box_grid(n, n, n, 1.0, 1.0, 1.0);
    auto e = random_edges(g, 7);
    for (auto _ : state) benchmark::DoNotOptimize(curl(e));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(e.size()));
}
BENCHMARK(BM_Curl)->Arg(16)->Arg(32);

static void BM_CurlDualCurl(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    auto g = box_grid(n, n, n, 1.0, 1.0, 1.0);
    auto e = random_edges(g, 11);
    for (auto _ : state) benchmark::DoNotOptimize(curl_dual(curl(e)));
}
BENCHMARK(BM_CurlDualCurl)->Arg(16)->Arg(32);

static void BM_HodgeDecompose(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    auto g = box_grid(n, n, n, 1.0, 1.0, 1.0, BoundaryKind::Wall, BoundaryKind::Wall,
                      BoundaryKind::Wall);
    auto e = random_edges(g, 13);
    for (auto _ : state) benchmark::DoNotOptimize(hodge_decompose(e, 1e-8));
}
BENCHMARK(BM_HodgeDecompose)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

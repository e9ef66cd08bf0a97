#include <benchmark/benchmark.h>

#include "meissner/constitutive.hpp"

using namespace meissner;

static void BM_InvertCubic(benchmark::State& state) {
    double t = 0.31;
    for (auto _ : state) {
        benchmark::DoNotOptimize(invert_cubic(t));
        t = 0.99 * t + 0.0031;  // wander through the domain
        if (t > kCurlCap) t = 0.01;
    }
}
BENCHMARK(BM_InvertCubic);

static void BM_InvertCubicNearEndpoint(benchmark::State& state) {
    double t = kCurlCap * (1.0 - 1e-8);
    for (auto _ : state) benchmark::DoNotOptimize(invert_cubic(t));
}
BENCHMARK(BM_InvertCubicNearEndpoint);

static void BM_SecondVariation(benchmark::State& state) {
    Vec3 A{0.3, 0.1, -0.2}, B{0.5, -0.4, 0.2};
    double f = 0.9, g = 0.3;
    for (auto _ : state) benchmark::DoNotOptimize(second_variation_form(f, A, g, B));
}
BENCHMARK(BM_SecondVariation);

BENCHMARK_MAIN();

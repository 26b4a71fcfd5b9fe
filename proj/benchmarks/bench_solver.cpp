#include <benchmark/benchmark.h>

#include <cmath>

#include "dnscatter/matcher.hpp"
#include "dnscatter/observables.hpp"

using namespace dnscatter;

namespace {

ScatteringConfig bench_config() {
    const Geometry g(1.0);
    return ScatteringConfig(g, 1, 2.3 * g.half_pi_over_d());
}

}  // namespace

static void BM_OverlapMatrix(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    for (auto _ : state) {
        OverlapMatrix O(N, 2 * N);
        benchmark::DoNotOptimize(O.matrix().data());
    }
}
BENCHMARK(BM_OverlapMatrix)->Arg(100)->Arg(200)->Arg(400);

static void BM_Assemble(benchmark::State& state) {
    const auto cfg = bench_config();
    const int N = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto op = assemble(cfg, N);
        benchmark::DoNotOptimize(op.A.data());
    }
}
BENCHMARK(BM_Assemble)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_SolveDirect(benchmark::State& state) {
    const auto cfg = bench_config();
    const int N = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto sol = solve_matching(cfg, N);
        benchmark::DoNotOptimize(sol.c.data());
    }
}
BENCHMARK(BM_SolveDirect)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_SolveSplit(benchmark::State& state) {
    const auto cfg = bench_config();
    const int N = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto s = solve_matching_split(cfg, N);
        benchmark::DoNotOptimize(s.solution.c.data());
    }
}
BENCHMARK(BM_SolveSplit)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

// One row of a 200-point scan is a solve plus the probabilities.
static void BM_ScanRows(benchmark::State& state) {
    ScanOptions o;
    o.k_min = 0.1 * o.geom.half_pi_over_d();
    o.k_max = 4.9 * o.geom.half_pi_over_d();
    o.steps = static_cast<int>(state.range(0));
    o.N = 100;
    for (auto _ : state) {
        auto t = scan(o);
        benchmark::DoNotOptimize(t.rows.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ScanRows)->Arg(20)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

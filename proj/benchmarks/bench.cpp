#include <benchmark/benchmark.h>

#include "nomafair/baselines.hpp"
#include "nomafair/model.hpp"
#include "nomafair/numerics.hpp"
#include "nomafair/perfect.hpp"
#include "nomafair/statistical.hpp"

namespace {

using namespace nomafair;

SystemConfig bench_config(int K, double alpha) {
    return SystemConfig::with_default_distances(K, snr_db_to_linear(20.0), 2.0, 0.9,
                                                alpha);
}

void BM_Bisect(benchmark::State& state) {
    const auto f = [](double x) { return x * x * x - 2.0; };
    for (auto _ : state) {
        BisectResult r = bisect(f, {0.0, 4.0, 1e-12});
        benchmark::DoNotOptimize(r.root);
    }
}
BENCHMARK(BM_Bisect);

void BM_StatisticalSolve(benchmark::State& state) {
    const SystemConfig cfg =
        bench_config(static_cast<int>(state.range(0)), state.range(1) / 10.0);
    for (auto _ : state) {
        SolveReport rep = solve_statistical(cfg);
        benchmark::DoNotOptimize(rep.objective);
    }
}
BENCHMARK(BM_StatisticalSolve)->Args({6, 10})->Args({6, 5})->Args({6, 1000});

void BM_AlternatingSolve(benchmark::State& state) {
    const SystemConfig cfg =
        bench_config(static_cast<int>(state.range(0)), state.range(1) / 10.0);
    const ChannelRealization H = sample_channels(cfg, 7);
    for (auto _ : state) {
        SolveReport rep = solve_perfect(H, cfg);
        benchmark::DoNotOptimize(rep.objective);
    }
}
BENCHMARK(BM_AlternatingSolve)->Args({4, 10})->Args({8, 10})->Args({5, 50});

void BM_TdmaPerfectSolve(benchmark::State& state) {
    const SystemConfig cfg = bench_config(5, 1.0);
    const ChannelRealization H = sample_channels(cfg, 7);
    for (auto _ : state) {
        SolveReport rep = tdma_perfect_solve(H, cfg);
        benchmark::DoNotOptimize(rep.objective);
    }
}
BENCHMARK(BM_TdmaPerfectSolve);

}  // namespace

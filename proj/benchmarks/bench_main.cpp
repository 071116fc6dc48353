#include <benchmark/benchmark.h>

#include "diffred/metrics.hpp"
#include "diffred/pipeline.hpp"
#include "diffred/synth.hpp"

using namespace diffred;

namespace {

DataMatrix spiked(Index n, Index D, std::uint64_t seed) {
    std::vector<double> profile{10.0};
    for (int i = 0; i < 30; ++i) {
        profile.push_back(1.0);
    }
    DataMatrix a = synth_spiked(n, D, SpectrumProfile(profile),
                                RandomStream(seed, StreamPurpose::SynthData, 0));
    a.flags.column_centered = true;
    return a;
}

void BM_TruncatedSvd(benchmark::State& state) {
    const Index n = state.range(0);
    DataMatrix a = spiked(n, n / 2, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(truncated_svd(a, 10));
    }
    state.SetComplexityN(static_cast<int64_t>(n));
}
BENCHMARK(BM_TruncatedSvd)->Arg(200)->Arg(500)->Arg(1000)->Complexity();

void BM_StressExact(benchmark::State& state) {
    const Index n = state.range(0);
    const int threads = static_cast<int>(state.range(1));
    DataMatrix a = spiked(n, 50, 2);
    Matrix at = a.values.leftCols(10);
    for (auto _ : state) {
        benchmark::DoNotOptimize(stress_exact(a.values, at, threads));
    }
}
BENCHMARK(BM_StressExact)
    ->Args({500, 1})
    ->Args({500, 0})
    ->Args({2000, 1})
    ->Args({2000, 0});

void BM_MonteCarloBest(benchmark::State& state) {
    const std::size_t eta = static_cast<std::size_t>(state.range(0));
    const int threads = static_cast<int>(state.range(1));
    DataMatrix a = spiked(500, 200, 3);
    for (auto _ : state) {
        RandomStream master(7, StreamPurpose::GaussianMap, 0);
        benchmark::DoNotOptimize(monte_carlo_best(a.values, 10, eta, master, threads));
    }
}
BENCHMARK(BM_MonteCarloBest)->Args({100, 1})->Args({100, 0});

void BM_EndToEndEmbed(benchmark::State& state) {
    DataMatrix a = spiked(500, 200, 4);
    DiffRedConfig cfg;
    cfg.k1 = 1;
    cfg.k2 = 9;
    cfg.eta = 100;
    cfg.seed = 5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(diffred_embed(a, cfg));
    }
}
BENCHMARK(BM_EndToEndEmbed);

} // namespace

BENCHMARK_MAIN();

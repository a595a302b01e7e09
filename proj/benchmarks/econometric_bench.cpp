#include "bench_data.hpp"

#include "hybridcast/econometric.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace hybridcast;

void BM_FracDiffWeights(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(frac_diff_weights(0.3, static_cast<std::size_t>(state.range(0))));
    }
}
BENCHMARK(BM_FracDiffWeights)->Arg(100)->Arg(1000);

void BM_FitArimaOrder(benchmark::State& state) {
    const auto x = bench::returns(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_arima_order(x, {2, 0, 2}));
    }
}
BENCHMARK(BM_FitArimaOrder)->Arg(500)->Arg(1500)->Unit(benchmark::kMillisecond);

// Full order search, the per-window cost of the ARIMA method.
void BM_FitArimaSearch(benchmark::State& state) {
    const auto x = bench::returns(1500);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_arima(x));
    }
}
BENCHMARK(BM_FitArimaSearch)->Unit(benchmark::kMillisecond);

void BM_FitArfima(benchmark::State& state) {
    const auto x = bench::returns(1500);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_arfima(x));
    }
}
BENCHMARK(BM_FitArfima)->Unit(benchmark::kMillisecond);

void BM_OneStepForecasts(benchmark::State& state) {
    const auto x = bench::returns(2000);
    const auto m = fit_arima_order(x, {2, 0, 2});
    for (auto _ : state) {
        benchmark::DoNotOptimize(one_step_forecasts(m, x));
    }
}
BENCHMARK(BM_OneStepForecasts);

}  // namespace

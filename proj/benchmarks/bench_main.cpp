#include <benchmark/benchmark.h>

#include <cmath>

#include "cvahedge/analytic_pricing.hpp"
#include "cvahedge/hedging_strategies.hpp"
#include "cvahedge/market_models.hpp"
#include "cvahedge/sim_engine.hpp"

using namespace cvahedge;

namespace {

const EuropeanOption kCall{OptionKind::call, 95.0, 1.0, 1.0};
const MertonParams kJumps{0.1, 0.2, -0.125, 0.1, 0.1};

void BM_BsGreeks(benchmark::State& st) {
    double S = 90.0;
    for (auto _ : st) {
        benchmark::DoNotOptimize(bs_greeks(kCall, S, 0.1, 0.2, 0.3));
        S = S < 110.0 ? S + 0.01 : 90.0;
    }
}
BENCHMARK(BM_BsGreeks);

void BM_ImpliedVol(benchmark::State& st) {
    double p = merton_price(kCall, 100.0, kJumps, 0.0).value;
    for (auto _ : st) benchmark::DoNotOptimize(bs_implied_vol(p, kCall, 100.0, 0.1, 0.0));
}
BENCHMARK(BM_ImpliedVol);

void BM_MertonGreeks(benchmark::State& st) {
    const double tol = std::pow(10.0, -static_cast<double>(st.range(0)));
    const unsigned q = st.range(1) ? mq_all : (mq_price | mq_delta | mq_gamma);
    for (auto _ : st) benchmark::DoNotOptimize(merton_greeks(kCall, 100.0, kJumps, 0.0, tol, q));
}
BENCHMARK(BM_MertonGreeks)->Args({4, 0})->Args({12, 0})->Args({12, 1})->Args({15, 1});

void BM_GbmPaths(benchmark::State& st) {
    auto g = TimeGrid::make(0.0, 1.0, 200);
    for (auto _ : st) benchmark::DoNotOptimize(simulate_gbm(GbmParams{}, 100.0, g, 512, 42));
    st.SetItemsProcessed(st.iterations() * 512);
}
BENCHMARK(BM_GbmPaths);

void BM_MertonPaths(benchmark::State& st) {
    auto g = TimeGrid::make(0.0, 1.0, 200);
    for (auto _ : st) benchmark::DoNotOptimize(simulate_merton(kJumps, 100.0, g, 512, 42));
    st.SetItemsProcessed(st.iterations() * 512);
}
BENCHMARK(BM_MertonPaths);

void BM_Experiment(benchmark::State& st, const char* name) {
    auto c = preset(name);
    c.paths = static_cast<std::size_t>(st.range(0));
    c.threads = 1;
    for (auto _ : st) benchmark::DoNotOptimize(run_experiment(c));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK_CAPTURE(BM_Experiment, fig1, "fig1")->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Experiment, fig7, "fig7")->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Experiment, fig9, "fig9")->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Experiment, fig10, "fig10")->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

#include <breakgauge/breaks.hpp>

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

using namespace breakgauge;

namespace {

std::vector<double> regime_series(int T) {
    std::mt19937 rng(42);
    std::normal_distribution<double> z(0.0, 2.0);
    std::vector<double> v(T);
    for (int t = 0; t < T; ++t) {
        double mean = t < T / 5     ? 20
                      : t < 2 * T / 5 ? 33
                      : t < 3 * T / 5 ? 23
                      : t < 4 * T / 5 ? 16
                                      : 12;
        v[t] = mean + z(rng);
    }
    return v;
}

} // namespace

static void BM_SegmentCostTable(benchmark::State& state) {
    auto v = regime_series(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        SegmentCostTable tab(v, 0.2);
        benchmark::DoNotOptimize(tab.cost(0, tab.size() - 1));
    }
}
BENCHMARK(BM_SegmentCostTable)->Arg(700)->Arg(2800);

static void BM_GlobalMinimizer(benchmark::State& state) {
    auto v = regime_series(2800);
    for (auto _ : state) {
        auto m = global_minimizer(v, static_cast<int>(state.range(0)), 0.20);
        benchmark::DoNotOptimize(m.ssr);
    }
}
BENCHMARK(BM_GlobalMinimizer)->Arg(1)->Arg(3)->Arg(4);

static void BM_RunBaiPerron(benchmark::State& state) {
    const int T = static_cast<int>(state.range(0));
    auto v = regime_series(T);
    std::vector<Date> dates;
    Date d = Date::from_ymd(2007, 1, 3);
    for (int i = 0; i < T; ++i) dates.push_back(d + i);
    BreakConfig cfg;
    cfg.trimming = 0.20;
    cfg.max_breaks = 5;
    for (auto _ : state) {
        auto rep = run_bai_perron(v, dates, cfg);
        benchmark::DoNotOptimize(rep.selected_m);
    }
}
BENCHMARK(BM_RunBaiPerron)->Arg(700)->Arg(2800)->Unit(benchmark::kMillisecond);

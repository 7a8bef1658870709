#include <breakgauge/hac.hpp>

#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include <random>

using namespace breakgauge;

namespace {

Eigen::MatrixXd ar1_moments(int T, int q, double phi) {
    std::mt19937 rng(7);
    std::normal_distribution<double> z;
    Eigen::MatrixXd m(T, q);
    for (int j = 0; j < q; ++j) {
        double prev = 0;
        for (int t = 0; t < T; ++t) m(t, j) = prev = phi * prev + z(rng);
    }
    return m;
}

} // namespace

static void BM_AndrewsBandwidth(benchmark::State& state) {
    auto m = ar1_moments(static_cast<int>(state.range(0)), 7, 0.5);
    for (auto _ : state)
        benchmark::DoNotOptimize(andrews_bandwidth(m, KernelKind::parzen));
}
BENCHMARK(BM_AndrewsBandwidth)->Arg(2800)->Arg(20000);

static void BM_LongRunCovariance(benchmark::State& state) {
    auto m = ar1_moments(static_cast<int>(state.range(0)), 7, 0.5);
    auto spec = KernelSpec::andrews(KernelKind::parzen);
    for (auto _ : state) {
        auto lrc = long_run_covariance(m, spec);
        benchmark::DoNotOptimize(lrc.matrix(0, 0));
    }
}
BENCHMARK(BM_LongRunCovariance)->Arg(2800)->Arg(20000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

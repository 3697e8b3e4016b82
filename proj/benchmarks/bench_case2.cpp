#include <benchmark/benchmark.h>

#include <vector>

#include "capgrav/case_general.hpp"
#include "capgrav/wave.hpp"

using namespace capgrav;

namespace {

WaveParameters bench_wave() {
  const double c = dispersion_speed(0.5, 0.0);
  return WaveParameters::make(0.5, 0.0, c - 0.2);
}

}  // namespace

static void BM_FitConstants(benchmark::State& state) {
  const WaveParameters wp = bench_wave();
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_constants(0.1, 0.5, wp));
  }
}
BENCHMARK(BM_FitConstants);

static void BM_BridgeBuild(benchmark::State& state) {
  const WaveParameters wp = bench_wave();
  const CaseIIConstants k = fit_constants(0.0, 0.47, wp);
  for (auto _ : state) {
    benchmark::DoNotOptimize(TauBridge(k, 1.0));
  }
}
BENCHMARK(BM_BridgeBuild)->Unit(benchmark::kMillisecond);

static void BM_BridgeEval(benchmark::State& state) {
  const WaveParameters wp = bench_wave();
  const CaseIIConstants k = fit_constants(0.0, 0.47, wp);
  const TauBridge bridge(k, 1.0);
  double t = 0.0;
  for (auto _ : state) {
    t += 1e-4;
    if (t > 0.9) t = 0.0;
    benchmark::DoNotOptimize(bridge.y_at(t));
  }
}
BENCHMARK(BM_BridgeEval);

static void BM_TrajectoryCase2(benchmark::State& state) {
  const WaveParameters wp = bench_wave();
  std::vector<double> grid;
  for (int i = 0; i <= 100; ++i) grid.push_back(i / 100.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(trajectory_case2(0.0, 0.15, grid, wp));
  }
}
BENCHMARK(BM_TrajectoryCase2)->Unit(benchmark::kMillisecond);

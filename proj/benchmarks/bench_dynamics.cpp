#include <benchmark/benchmark.h>

#include "capgrav/case_equal.hpp"
#include "capgrav/dynamics.hpp"
#include "capgrav/wave.hpp"

using namespace capgrav;

static void BM_FieldSample(benchmark::State& state) {
  const WaveParameters wp = WaveParameters::make(0.5, 0.3, 0.2);
  double x = 0.0;
  for (auto _ : state) {
    x += 1e-6;
    benchmark::DoNotOptimize(field_sample(x, 0.5, 1.0, wp));
  }
}
BENCHMARK(BM_FieldSample);

static void BM_IntegrateTrajectory(benchmark::State& state) {
  const WaveParameters wp = WaveParameters::make_equal_current(1.2, 0.0);
  IntegratorConfig cfg;
  cfg.rel_tol = 1e-10;
  cfg.abs_tol = 1e-12;
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate({0.1, 0.2, 0.0}, 10.0, wp, cfg));
  }
}
BENCHMARK(BM_IntegrateTrajectory)->Unit(benchmark::kMillisecond);

static void BM_TrajectoryCase1(benchmark::State& state) {
  const WaveParameters wp = WaveParameters::make_equal_current(1.2, 0.0);
  std::vector<double> grid;
  for (int i = 0; i <= 100; ++i) grid.push_back(5.0 * i / 100.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(trajectory_case1(0.12, 0.2, grid, wp));
  }
}
BENCHMARK(BM_TrajectoryCase1)->Unit(benchmark::kMillisecond);

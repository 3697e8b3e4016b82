#include <benchmark/benchmark.h>

#include "capgrav/elliptic.hpp"

using namespace capgrav;

static void BM_CompleteK(benchmark::State& state) {
  const auto m = EllipticModulusSquared::from_parameter(
      static_cast<double>(state.range(0)) / 100.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(complete_elliptic_k(m));
  }
}
BENCHMARK(BM_CompleteK)->Arg(10)->Arg(50)->Arg(99);

static void BM_IncompleteF(benchmark::State& state) {
  const auto m = EllipticModulusSquared::from_parameter(0.6);
  double phi = 0.1;
  for (auto _ : state) {
    phi += 1e-6;
    benchmark::DoNotOptimize(incomplete_elliptic_f(phi, m));
  }
}
BENCHMARK(BM_IncompleteF);

static void BM_JacobiTriple(benchmark::State& state) {
  const auto m = EllipticModulusSquared::from_parameter(
      static_cast<double>(state.range(0)) / 100.0);
  double u = -10.0;
  for (auto _ : state) {
    u += 1e-5;
    benchmark::DoNotOptimize(jacobi_elliptic(u, m));
  }
}
BENCHMARK(BM_JacobiTriple)->Arg(10)->Arg(50)->Arg(99);

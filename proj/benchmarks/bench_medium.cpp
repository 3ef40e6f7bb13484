#include <benchmark/benchmark.h>

#include "qotto/medium.hpp"

using namespace qotto;

static void BM_thermal_energy(benchmark::State& state) {
  const Medium m(static_cast<int>(state.range(0)), 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(thermal_energy(m, 1.0, 2e-3));
  }
}
BENCHMARK(BM_thermal_energy)->Arg(50)->Arg(500)->Arg(5000);

static void BM_mu_lambda(benchmark::State& state) {
  double s = 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mu_lambda(0.5, s));
    s = s < 8.0 ? s * 1.01 : 1e-3;
  }
}
BENCHMARK(BM_mu_lambda);

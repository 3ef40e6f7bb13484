#include <benchmark/benchmark.h>

#include "qotto/optimize.hpp"

using namespace qotto;

static void BM_optimize_x_closed_form(benchmark::State& state) {
  const EngineParams params{Medium(static_cast<int>(state.range(0)), 0.0),
                            Reservoirs(2e-3, 6e-4), 1.0, 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimize_x(params, CycleMode::closed_form, 1.5).x_opt);
  }
}
BENCHMARK(BM_optimize_x_closed_form)->Arg(50)->Arg(500);

static void BM_adiabatic_optimum(benchmark::State& state) {
  const Medium m(500, 0.0);
  const Reservoirs r(2e-3, 6e-4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(adiabatic_optimum(m, r).x_opt);
  }
}
BENCHMARK(BM_adiabatic_optimum);

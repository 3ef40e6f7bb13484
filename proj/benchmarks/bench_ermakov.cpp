#include <benchmark/benchmark.h>

#include "qotto/ermakov.hpp"

using namespace qotto;

static void BM_solve_ermakov_accidental(benchmark::State& state) {
  const double tau = 0.1 * static_cast<double>(state.range(0));
  const auto p = accidental_protocol(1.0, 10.0 / 3.0, tau, StrokeDirection::compression);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_ermakov(p).final_q());
  }
}
BENCHMARK(BM_solve_ermakov_accidental)->Arg(5)->Arg(19)->Arg(50);

static void BM_accidental_q_closed(benchmark::State& state) {
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(accidental_q_closed(x, gamma_of(1.0, 1.5, x)));
    x = x < 0.9 ? x + 1e-4 : 0.1;
  }
}
BENCHMARK(BM_accidental_q_closed);

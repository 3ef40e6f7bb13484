#pragma once

#include <functional>
#include <vector>

#include "qotto/cycle.hpp"

// Output-work maximization over the compression ratio x = omega1/omega2 at
// fixed stroke time, plus the derived quantities used for the efficiency-at-
// maximum-power analysis: the nonadiabatic correction factor N_F, the
// closed-form adiabatic optimum, parameter sweeps, and the stroke times at
// which the finite-time efficiency crosses the adiabatic one.

namespace qotto {

// Temperature regime of the cold bath, classified by sigma_c = N beta_c omega1:
// high_t for sigma_c < 0.1 (Curzon-Ahlborn-like optimum), intermediate for
// 1 <= sigma_c <= N/10, low_t for sigma_c > N; numeric otherwise.
enum class TempRegime { numeric, adiabatic_closed, high_t, intermediate, low_t };
const char* to_string(TempRegime r);
TempRegime classify_regime(double sigma_c, int n_particles);

struct EngineParams {
  Medium medium;
  Reservoirs reservoirs;
  double omega1 = 1.0;
  double isochore_overhead = 0.0;
};

struct OptimizationResult {
  double x_opt = 0.0;
  double w_max = 0.0;
  double power_max = 0.0;   // w_max / cycle time; NaN when the cycle time is 0
  double efficiency = 0.0;  // at x_opt; NaN when not operating
  double q_ab = 1.0, q_cd = 1.0;
  TempRegime regime = TempRegime::numeric;
  int iterations = 0;  // objective evaluations spent
  bool operating = false;
  bool local_max_certified = false;  // W(x_opt +- 1e-4) <= W(x_opt) verified
  bool high_t_premise_ok = false;    // sigma_h <= 0.1 at the optimum
};

// Builds the stroke protocol for a given compression ratio (numeric mode).
using ProtocolBuilder = std::function<TrapProtocol(double x, StrokeDirection)>;

// Stroke factors and their x-derivatives at fixed stroke time.  Derivatives
// are analytic for the closed-form families and relative central differences
// (step 1e-5) for numeric protocols.
struct StrokeFactors {
  double q_ab, q_cd;
  double dq_ab, dq_cd;  // d/dx at fixed tau
};
StrokeFactors stroke_q_derivatives(CycleMode mode, double x, double tau,
                                   double omega1 = 1.0,
                                   const ProtocolBuilder* builder = nullptr);

// Nonadiabatic correction to the maximum-power condition:
//   N_F = (Q*_CD + x dQ*_CD/dx) / (Q*_AB - x dQ*_AB/dx).
// 1 in the adiabatic limit, x^2 in the sudden limit.  Throws
// std::domain_error when the denominator vanishes.
double nf_factor(CycleMode mode, double x, double tau, double omega1 = 1.0);

// Maximizes the output work over x in [1e-3, 1 - 1e-4] by golden-section
// refinement of a 20-point log-spaced coarse scan; absolute x tolerance 1e-8.
// Never throws for a non-operating engine: the result carries operating=false.
OptimizationResult optimize_x(const EngineParams& params, CycleMode mode, double tau);
OptimizationResult optimize_x(const EngineParams& params, CycleMode mode, double tau,
                              const ProtocolBuilder& builder);

// Closed-form adiabatic optimum in the continuum limit:
//   x_opt = sqrt(a beta_c E_{N,1/2}(omega1, beta_c) / N),
// where E_{N,1/2} is the exact thermal energy of the medium with lambda
// replaced by 1/2; w_max = N/(a beta_c) (1 - x_opt)^2, efficiency 1 - x_opt.
// x_opt >= 1 is reported as non-operating.
OptimizationResult adiabatic_optimum(const Medium& medium, const Reservoirs& res,
                                     double omega1 = 1.0);

enum class SweepAxis { temperature_ratio, stroke_time, interaction, particle_number };
const char* to_string(SweepAxis a);

struct SweepPoint {
  double axis_value;
  OptimizationResult opt;
};
struct SweepResult {
  SweepAxis axis;
  CycleMode mode;
  EngineParams base;
  double tau;
  std::vector<SweepPoint> points;
};

// Maximum-power optimization along one parameter axis; values must increase
// strictly.  Non-operating points are kept in the result (flagged), so sweep
// consumers can render them as gaps.
SweepResult max_power_sweep(const EngineParams& base, CycleMode mode, double tau,
                            SweepAxis axis, const std::vector<double>& values);

// First window (tau1_prime, tau1) of stroke times where the accidental
// protocol's efficiency at maximum power exceeds the adiabatic value, located
// by bisection to 1e-6/omega1 on a scan of (0, 10]/omega1.  tau1 coincides
// with sta_time(x_opt_adiabatic, omega1, 1).
struct CrossingTimes {
  double tau1_prime = 0.0;
  double tau1 = 0.0;
  double sta_prediction = 0.0;
  double x_opt_adiabatic = 0.0;
  double eta_adiabatic = 0.0;
};
CrossingTimes crossing_times(double a, const Medium& medium, double beta_c,
                             double omega1 = 1.0);

}  // namespace qotto

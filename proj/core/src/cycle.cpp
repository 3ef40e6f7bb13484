#include "qotto/cycle.hpp"

#include <cmath>
#include <limits>

namespace qotto {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// Endpoint Q* of one unitary stroke for the requested mode.
double stroke_q(const TrapProtocol& p, CycleMode mode, double x, double omega1) {
  switch (mode) {
    case CycleMode::adiabatic:
    case CycleMode::cd:
    case CycleMode::lcd:
      return 1.0;
    case CycleMode::sudden:
      return sudden_quench_q(x);
    case CycleMode::closed_form: {
      require(p.kind() == ProtocolKind::accidental,
              "run_cycle: closed_form mode requires accidental strokes");
      return accidental_q_closed(x, gamma_of(omega1, p.duration(), x));
    }
    case CycleMode::numeric:
      return solve_ermakov(p).final_q();
  }
  throw std::invalid_argument("run_cycle: unknown mode");
}

}  // namespace

const char* to_string(CycleMode m) {
  switch (m) {
    case CycleMode::numeric: return "numeric";
    case CycleMode::closed_form: return "closed_form";
    case CycleMode::adiabatic: return "adiabatic";
    case CycleMode::sudden: return "sudden";
    case CycleMode::cd: return "cd";
    case CycleMode::lcd: return "lcd";
  }
  return "?";
}

CycleSpec::CycleSpec(Medium m, Reservoirs r, double w1, double w2, TrapProtocol comp,
                     TrapProtocol exp, double overhead)
    : medium(m),
      reservoirs(r),
      omega1(w1),
      omega2(w2),
      compression(std::move(comp)),
      expansion(std::move(exp)),
      isochore_overhead(overhead) {
  require(omega1 > 0.0, "CycleSpec: omega1 must be > 0");
  require(omega2 > omega1, "CycleSpec: requires omega1 < omega2");
  require(isochore_overhead >= 0.0, "CycleSpec: isochore_overhead must be >= 0");
}

double work_total(double e_a, double e_c, double x, double q_ab, double q_cd) {
  require(x > 0.0 && x < 1.0, "work_total: x must lie in (0, 1)");
  return (1.0 - q_ab / x) * e_a + (1.0 - x * q_cd) * e_c;
}

CycleResult run_cycle(const CycleSpec& spec, CycleMode mode) {
  const double x = spec.x();
  const double q_ab = stroke_q(spec.compression, mode, x, spec.omega1);
  const double q_cd = stroke_q(spec.expansion, mode, x, spec.omega1);

  CycleResult r{};
  r.e_a = thermal_energy(spec.medium, spec.omega1, spec.reservoirs.beta_c);
  r.e_c = thermal_energy(spec.medium, spec.omega2, spec.reservoirs.beta_h);
  r.e_b = q_ab * r.e_a / x;
  r.e_d = q_cd * x * r.e_c;
  r.w1 = r.e_b - r.e_a;
  r.q2 = r.e_c - r.e_b;
  r.w3 = r.e_d - r.e_c;
  r.q4 = r.e_a - r.e_d;
  r.w_total = -(r.w1 + r.w3);
  r.q_ab = q_ab;
  r.q_cd = q_cd;

  // W and Q2 are differences of corner energies, so below this threshold
  // their signs are cancellation noise, not physics.
  const double scale = std::max({std::abs(r.e_a), std::abs(r.e_b), std::abs(r.e_c),
                                 std::abs(r.e_d)});
  const double noise = 32.0 * std::numeric_limits<double>::epsilon() * scale;
  const bool marginal = std::abs(r.q2) <= noise && std::abs(r.w_total) <= noise &&
                        q_ab * q_cd <= 1.0 + 1e-9;
  r.engine = (r.q2 > noise && r.w_total > noise) || marginal;
  if (marginal) {
    // zero-work boundary (a = x): W = Q2 = 0 forces Q*_AB Q*_CD = 1, and the
    // efficiency limit approaching the boundary is the adiabatic value.
    r.efficiency = 1.0 - x;
  } else if (r.engine) {
    // algebraically |W|/Q2, arranged so the common factor (1 - ratio) cancels
    // exactly when both strokes are adiabatic
    const double ratio = r.e_a / (x * r.e_c);
    r.efficiency = 1.0 - x * (q_cd - ratio) / (1.0 - q_ab * ratio);
  } else {
    r.efficiency = kNaN;
  }

  const double unitary_time =
      (mode == CycleMode::sudden) ? 0.0
                                  : spec.compression.duration() + spec.expansion.duration();
  r.cycle_time = unitary_time + spec.isochore_overhead;
  r.power = (r.cycle_time > 0.0) ? r.w_total / r.cycle_time : kNaN;

  r.x = x;
  r.a = spec.reservoirs.temperature_ratio();
  r.lambda = spec.medium.lambda;
  r.n_particles = spec.medium.n_particles;
  r.tau = spec.compression.duration();
  return r;
}

EfficiencyBounds efficiency_bounds(const CycleResult& r) {
  const double q_sq = sudden_quench_q(r.x);
  const double w_sq = work_total(r.e_a, r.e_c, r.x, q_sq, q_sq);
  const double q2_sq = r.e_c - q_sq * r.e_a / r.x;
  EfficiencyBounds b{};
  b.eta_sudden = (w_sq > 0.0 && q2_sq > 0.0) ? w_sq / q2_sq : 0.0;
  b.eta_otto = 1.0 - r.x;
  b.eta_nonadiabatic = 1.0 - r.x * r.q_cd;
  return b;
}

double cycle_power(const CycleResult& r) {
  if (!(r.cycle_time > 0.0))
    throw std::domain_error("cycle_power: cycle time is 0 (sudden cycle, no overhead)");
  return r.w_total / r.cycle_time;
}

}  // namespace qotto

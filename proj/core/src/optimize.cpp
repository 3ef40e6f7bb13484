#include "qotto/optimize.hpp"

#include <cmath>
#include <limits>

namespace qotto {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kXLo = 1e-3;
constexpr double kXHi = 1.0 - 1e-4;

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// Endpoint factor of one stroke at compression ratio x (no derivatives).
double mode_q(CycleMode mode, double x, double tau, double omega1,
              const ProtocolBuilder* builder, StrokeDirection dir) {
  switch (mode) {
    case CycleMode::adiabatic:
    case CycleMode::cd:
    case CycleMode::lcd:
      return 1.0;
    case CycleMode::sudden:
      return sudden_quench_q(x);
    case CycleMode::closed_form:
      return accidental_q_closed(x, gamma_of(omega1, tau, x));
    case CycleMode::numeric: {
      require(builder != nullptr, "optimize: numeric mode needs a protocol builder");
      return solve_ermakov((*builder)(x, dir)).final_q();
    }
  }
  throw std::invalid_argument("optimize: unknown mode");
}

// d/dx of the closed-form accidental Q* at fixed tau.  Q* = 1 + h with
// h = (cosh(sqrt(e) L) - 1)/e, L = ln x, e = 1 - gamma^2, and
// gamma = 2 omega1 tau/(1-x), so de/dx = -2 gamma^2/(1-x).
double accidental_dq_dx(double x, double gamma) {
  const double L = std::log(x);
  const double e = (1.0 - gamma) * (1.0 + gamma);
  double s;       // sinh(sqrt(e) L)/sqrt(e) = dh/dL
  double dh_de;   // (L s / 2 - h)/e, regular at e = 0
  if (std::abs(e) < 1e-4) {
    const double L2 = L * L;
    s = L * (1.0 + e * L2 * (1.0 / 6 + e * L2 * (1.0 / 120 + e * L2 / 5040)));
    dh_de = L2 * L2 *
            (1.0 / 24 + e * L2 * (1.0 / 360 + e * L2 * (1.0 / 13440 + e * L2 / 907200)));
  } else {
    double h;
    if (e > 0.0) {
      const double r = std::sqrt(e);
      s = std::sinh(r * L) / r;
      const double sh = std::sinh(0.5 * r * L);
      h = 2.0 * sh * sh / e;
    } else {
      const double r = std::sqrt(-e);
      s = std::sin(r * L) / r;
      const double sn = std::sin(0.5 * r * L);
      h = -2.0 * sn * sn / e;
    }
    dh_de = (0.5 * L * s - h) / e;
  }
  const double de_dx = -2.0 * gamma * gamma / (1.0 - x);
  return s / x + dh_de * de_dx;
}

}  // namespace

const char* to_string(TempRegime r) {
  switch (r) {
    case TempRegime::numeric: return "numeric";
    case TempRegime::adiabatic_closed: return "adiabatic_closed";
    case TempRegime::high_t: return "high_T";
    case TempRegime::intermediate: return "intermediate";
    case TempRegime::low_t: return "low_T";
  }
  return "?";
}

const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::temperature_ratio: return "a";
    case SweepAxis::stroke_time: return "tau";
    case SweepAxis::interaction: return "lambda";
    case SweepAxis::particle_number: return "n";
  }
  return "?";
}

TempRegime classify_regime(double sigma_c, int n_particles) {
  if (sigma_c < 0.1) return TempRegime::high_t;
  if (sigma_c >= 1.0 && sigma_c <= n_particles / 10.0) return TempRegime::intermediate;
  if (sigma_c > n_particles) return TempRegime::low_t;
  return TempRegime::numeric;
}

StrokeFactors stroke_q_derivatives(CycleMode mode, double x, double tau, double omega1,
                                   const ProtocolBuilder* builder) {
  require(x > 0.0 && x < 1.0, "stroke_q_derivatives: x must lie in (0, 1)");
  switch (mode) {
    case CycleMode::adiabatic:
    case CycleMode::cd:
    case CycleMode::lcd:
      return {1.0, 1.0, 0.0, 0.0};
    case CycleMode::sudden: {
      const double q = sudden_quench_q(x);
      const double dq = 0.5 * (1.0 - 1.0 / (x * x));
      return {q, q, dq, dq};
    }
    case CycleMode::closed_form: {
      const double gamma = gamma_of(omega1, tau, x);
      const double q = accidental_q_closed(x, gamma);
      const double dq = accidental_dq_dx(x, gamma);
      return {q, q, dq, dq};  // compression and expansion share gamma and x
    }
    case CycleMode::numeric: {
      const double dx = 1e-5 * x;
      auto q_at = [&](double xx, StrokeDirection d) {
        return mode_q(mode, xx, tau, omega1, builder, d);
      };
      StrokeFactors f{};
      f.q_ab = q_at(x, StrokeDirection::compression);
      f.q_cd = q_at(x, StrokeDirection::expansion);
      f.dq_ab = (q_at(x + dx, StrokeDirection::compression) -
                 q_at(x - dx, StrokeDirection::compression)) /
                (2.0 * dx);
      f.dq_cd = (q_at(x + dx, StrokeDirection::expansion) -
                 q_at(x - dx, StrokeDirection::expansion)) /
                (2.0 * dx);
      return f;
    }
  }
  throw std::invalid_argument("stroke_q_derivatives: unknown mode");
}

double nf_factor(CycleMode mode, double x, double tau, double omega1) {
  const StrokeFactors f = stroke_q_derivatives(mode, x, tau, omega1);
  const double denom = f.q_ab - x * f.dq_ab;
  if (std::abs(denom) < 1e-12)
    throw std::domain_error("nf_factor: denominator Q*_AB - x dQ*_AB/dx vanishes");
  return (f.q_cd + x * f.dq_cd) / denom;
}

namespace {

OptimizationResult optimize_impl(const EngineParams& params, CycleMode mode, double tau,
                                 const ProtocolBuilder* builder) {
  if (mode != CycleMode::sudden)
    require(tau > 0.0, "optimize_x: tau must be > 0");
  const Medium& med = params.medium;
  const Reservoirs& res = params.reservoirs;
  const double w1 = params.omega1;
  require(w1 > 0.0, "optimize_x: omega1 must be > 0");

  const double e_a = thermal_energy(med, w1, res.beta_c);
  int evals = 0;
  auto objective = [&](double x) {
    ++evals;
    const double q_ab = mode_q(mode, x, tau, w1, builder, StrokeDirection::compression);
    const double q_cd = mode_q(mode, x, tau, w1, builder, StrokeDirection::expansion);
    const double e_c = thermal_energy(med, w1 / x, res.beta_h);
    return work_total(e_a, e_c, x, q_ab, q_cd);
  };

  // Coarse log-spaced scan to bracket the global maximum (|W| can be
  // multimodal in x for oscillatory Q*).
  constexpr int kScan = 20;
  double xs[kScan], ws[kScan];
  const double l_lo = std::log(kXLo), l_hi = std::log(kXHi);
  int best = 0;
  for (int i = 0; i < kScan; ++i) {
    xs[i] = std::exp(l_lo + (l_hi - l_lo) * i / (kScan - 1));
    ws[i] = objective(xs[i]);
    if (ws[i] > ws[best]) best = i;
  }
  double a = xs[std::max(best - 1, 0)];
  double b = xs[std::min(best + 1, kScan - 1)];

  // Golden-section refinement (maximization).
  constexpr double kGr = 0.6180339887498949;  // (sqrt(5)-1)/2
  double c = b - kGr * (b - a);
  double d = a + kGr * (b - a);
  double fc = objective(c), fd = objective(d);
  while (b - a > 1e-8) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGr * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGr * (b - a);
      fd = objective(d);
    }
  }

  OptimizationResult r{};
  r.x_opt = 0.5 * (a + b);
  r.w_max = objective(r.x_opt);
  r.operating = r.w_max > 0.0;
  r.iterations = evals;

  {  // local-maximum certificate
    const double step = 1e-4;
    const double lo = std::max(r.x_opt - step, 0.5 * kXLo);
    const double hi = std::min(r.x_opt + step, 0.5 * (1.0 + kXHi));
    const double slack = 1e-12 * std::max(1.0, std::abs(r.w_max));
    r.local_max_certified =
        objective(lo) <= r.w_max + slack && objective(hi) <= r.w_max + slack;
  }

  r.q_ab = mode_q(mode, r.x_opt, tau, w1, builder, StrokeDirection::compression);
  r.q_cd = mode_q(mode, r.x_opt, tau, w1, builder, StrokeDirection::expansion);
  const double e_c = thermal_energy(med, w1 / r.x_opt, res.beta_h);
  const double q2 = e_c - r.q_ab * e_a / r.x_opt;
  r.efficiency = (r.operating && q2 > 0.0) ? r.w_max / q2 : kNaN;

  const double cycle_time =
      (mode == CycleMode::sudden ? 0.0 : 2.0 * tau) + params.isochore_overhead;
  r.power_max = cycle_time > 0.0 ? r.w_max / cycle_time : kNaN;

  const double sigma_c = med.n_particles * res.beta_c * w1;
  r.regime = classify_regime(sigma_c, med.n_particles);
  r.high_t_premise_ok = med.n_particles * res.beta_h * (w1 / r.x_opt) <= 0.1;
  return r;
}

}  // namespace

OptimizationResult optimize_x(const EngineParams& params, CycleMode mode, double tau) {
  if (mode == CycleMode::numeric) {
    // Default numeric family: accidental strokes of the given duration.
    const double w1 = params.omega1;
    ProtocolBuilder builder = [w1, tau](double x, StrokeDirection dir) {
      return accidental_protocol(w1, w1 / x, tau, dir);
    };
    return optimize_impl(params, mode, tau, &builder);
  }
  return optimize_impl(params, mode, tau, nullptr);
}

OptimizationResult optimize_x(const EngineParams& params, CycleMode mode, double tau,
                              const ProtocolBuilder& builder) {
  return optimize_impl(params, mode, tau, &builder);
}

OptimizationResult adiabatic_optimum(const Medium& medium, const Reservoirs& res,
                                     double omega1) {
  require(omega1 > 0.0, "adiabatic_optimum: omega1 must be > 0");
  const double a = res.temperature_ratio();
  const double n = medium.n_particles;
  // The lambda-dependence of the optimum enters only through the shifted
  // ground-state term, equivalent to evaluating the energy at lambda = 1/2.
  const Medium shifted(medium.n_particles, 0.5);
  const double e_half = thermal_energy(shifted, omega1, res.beta_c);

  OptimizationResult r{};
  r.regime = TempRegime::adiabatic_closed;
  r.x_opt = std::sqrt(a * res.beta_c * e_half / n);
  r.operating = r.x_opt < 1.0;
  if (r.operating) {
    const double d = 1.0 - r.x_opt;
    r.w_max = n / (a * res.beta_c) * d * d;
    r.efficiency = d;
  } else {
    r.w_max = 0.0;
    r.efficiency = kNaN;
  }
  r.power_max = kNaN;  // no stroke-time scale in the closed form
  r.q_ab = r.q_cd = 1.0;
  r.high_t_premise_ok =
      r.operating && n * res.beta_h * (omega1 / r.x_opt) <= 0.1;
  return r;
}

SweepResult max_power_sweep(const EngineParams& base, CycleMode mode, double tau,
                            SweepAxis axis, const std::vector<double>& values) {
  require(!values.empty(), "max_power_sweep: empty grid");
  for (std::size_t i = 1; i < values.size(); ++i)
    require(values[i] > values[i - 1], "max_power_sweep: grid must increase strictly");

  SweepResult out{axis, mode, base, tau, {}};
  out.points.reserve(values.size());
  for (double v : values) {
    EngineParams p = base;
    double point_tau = tau;
    switch (axis) {
      case SweepAxis::temperature_ratio:
        require(v > 0.0 && v <= 1.0, "max_power_sweep: a must lie in (0, 1]");
        p.reservoirs = Reservoirs(base.reservoirs.beta_c, v * base.reservoirs.beta_c);
        break;
      case SweepAxis::stroke_time:
        point_tau = v;
        break;
      case SweepAxis::interaction:
        p.medium = Medium(base.medium.n_particles, v);
        break;
      case SweepAxis::particle_number: {
        const int n = static_cast<int>(std::lround(v));
        require(n >= 1 && std::abs(v - n) < 1e-9,
                "max_power_sweep: particle numbers must be integers");
        p.medium = Medium(n, base.medium.lambda);
        break;
      }
    }
    out.points.push_back({v, optimize_x(p, mode, point_tau)});
  }
  return out;
}

CrossingTimes crossing_times(double a, const Medium& medium, double beta_c,
                             double omega1) {
  require(a > 0.0 && a < 1.0, "crossing_times: a must lie in (0, 1)");
  require(beta_c > 0.0, "crossing_times: beta_c must be > 0");
  require(omega1 > 0.0, "crossing_times: omega1 must be > 0");
  const EngineParams params{medium, Reservoirs(beta_c, a * beta_c), omega1, 0.0};

  const OptimizationResult ad = optimize_x(params, CycleMode::adiabatic, 1.0);
  if (!ad.operating)
    throw std::runtime_error("crossing_times: engine does not operate adiabatically");

  auto excess = [&](double tau) {
    const OptimizationResult o = optimize_x(params, CycleMode::closed_form, tau);
    return o.operating ? o.efficiency - ad.efficiency
                       : -std::numeric_limits<double>::infinity();
  };

  // Scan for the first efficiency window, then bisect both edges.
  const double tau_max = 10.0 / omega1;
  const double step = 0.01 / omega1;
  const double tol = 1e-6 / omega1;
  double prev_tau = step, prev_g = excess(prev_tau);
  double up_lo = 0.0, up_hi = 0.0, down_lo = 0.0, down_hi = 0.0;
  bool inside = false, found = false;
  for (double tau = 2.0 * step; tau <= tau_max + 0.5 * step; tau += step) {
    const double g = excess(tau);
    if (!inside && prev_g <= 0.0 && g > 0.0) {
      up_lo = prev_tau;
      up_hi = tau;
      inside = true;
    } else if (inside && g <= 0.0) {
      down_lo = prev_tau;
      down_hi = tau;
      found = true;
      break;
    }
    prev_tau = tau;
    prev_g = g;
  }
  if (!found)
    throw std::runtime_error(
        "crossing_times: no efficiency window found for tau in (0, 10/omega1]");

  auto bisect = [&](double lo, double hi, bool upward) {
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      const bool pos = excess(mid) > 0.0;
      if (pos == upward)
        hi = mid;
      else
        lo = mid;
    }
    return 0.5 * (lo + hi);
  };

  CrossingTimes ct{};
  ct.x_opt_adiabatic = ad.x_opt;
  ct.eta_adiabatic = ad.efficiency;
  ct.tau1_prime = bisect(up_lo, up_hi, true);
  ct.tau1 = bisect(down_lo, down_hi, false);
  ct.sta_prediction = sta_time(ad.x_opt, omega1, 1);
  return ct;
}

}  // namespace qotto

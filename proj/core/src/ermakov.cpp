#include "qotto/ermakov.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "qotto/ode.hpp"

namespace qotto {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// cosh(sqrt(e) z)            -> cs.first
// sinh(sqrt(e) z)/sqrt(e)    -> cs.second
// continued analytically through e <= 0 (cos / sinc); the series branch keeps
// both smooth across e = 0 (the gamma = 1 branch point, e = 1 - gamma^2).
std::pair<double, double> cosh_sinhc(double e, double z) {
  if (std::abs(e) < 1e-4) {
    const double w = e * z * z;
    // c = sum w^k/(2k)!,  s = z sum w^k/(2k+1)!
    const double c =
        1.0 + w * (1.0 / 2 + w * (1.0 / 24 + w * (1.0 / 720 + w / 40320)));
    const double s =
        z * (1.0 + w * (1.0 / 6 + w * (1.0 / 120 + w * (1.0 / 5040 + w / 362880))));
    return {c, s};
  }
  if (e > 0.0) {
    const double a = std::sqrt(e);
    return {std::cosh(a * z), std::sinh(a * z) / a};
  }
  const double a = std::sqrt(-e);
  return {std::cos(a * z), std::sin(a * z) / a};
}

}  // namespace

double q_factor_scaled(double b, double bdot, double omega_sq_t, double omega0,
                       double b_ad_sq) {
  require(b > 0.0, "q_factor: b must be > 0");
  require(omega0 > 0.0, "q_factor: omega0 must be > 0");
  const double w0sq = omega0 * omega0;
  return b_ad_sq *
         (0.5 / (b * b) + 0.5 * (omega_sq_t * b * b + bdot * bdot) / w0sq);
}

double q_factor(double b, double bdot, double omega_t, double omega0) {
  require(omega_t > 0.0, "q_factor: omega_t must be > 0");
  return q_factor_scaled(b, bdot, omega_t * omega_t, omega0, omega0 / omega_t);
}

double sudden_quench_q(double x) {
  require(x > 0.0, "sudden_quench_q: x must be > 0");
  return 0.5 * (x * x + 1.0) / x;
}

double accidental_q_closed(double x, double gamma) {
  require(x > 0.0 && x < 1.0, "accidental_q_closed: x must lie in (0, 1)");
  require(gamma >= 0.0, "accidental_q_closed: gamma must be >= 0");
  const double L = std::log(x);
  const double e = (1.0 - gamma) * (1.0 + gamma);  // 1 - gamma^2
  if (std::abs(e) < 1e-4) {
    // Q* = 1 + sum_{m>=1} e^{m-1} L^{2m}/(2m)!
    const double L2 = L * L;
    return 1.0 +
           L2 * (1.0 / 2 +
                 e * L2 * (1.0 / 24 +
                           e * L2 * (1.0 / 720 + e * L2 * (1.0 / 40320))));
  }
  if (e > 0.0) {  // gamma < 1, hyperbolic branch; 2 sinh^2 keeps it stable
    const double u = 0.5 * std::sqrt(e) * L;
    const double sh = std::sinh(u);
    return 1.0 + 2.0 * sh * sh / e;
  }
  const double u = 0.5 * std::sqrt(-e) * L;  // gamma > 1, oscillatory branch
  const double sn = std::sin(u);
  return 1.0 - 2.0 * sn * sn / e;
}

FundamentalPair fundamental_solutions(double x, double gamma, double t) {
  require(x > 0.0 && x < 1.0, "fundamental_solutions: x must lie in (0, 1)");
  require(gamma > 0.0, "fundamental_solutions: gamma must be > 0");
  const double t1 = 0.5 * gamma;  // omega1 = 1 units
  const double tau = (1.0 - x) * t1;
  require(t >= 0.0 && t <= tau * (1.0 + 1e-12),
          "fundamental_solutions: t must lie in [0, tau]");
  const double phi = 1.0 - t / t1;
  const double psi = std::log(phi);
  const double e = (1.0 - gamma) * (1.0 + gamma);
  const auto [c, s] = cosh_sinhc(e, 0.5 * psi);
  const double sqrt_phi = std::sqrt(phi);
  return {
      sqrt_phi * (c - s),
      0.5 * gamma * gamma / t1 * s / sqrt_phi,
      -2.0 * t1 * sqrt_phi * s,
      (c + s) / sqrt_phi,
  };
}

double husimi_q(const FundamentalPair& p, double omega0, double omega_t) {
  require(omega0 > 0.0 && omega_t > 0.0, "husimi_q: frequencies must be > 0");
  const double wt2 = omega_t * omega_t;
  const double w02 = omega0 * omega0;
  return ((p.g1dot * p.g1dot + wt2 * p.g1 * p.g1) +
          w02 * (p.g2dot * p.g2dot + wt2 * p.g2 * p.g2)) /
         (2.0 * omega0 * omega_t);
}

double sta_gamma(double x, int n) {
  require(x > 0.0 && x < 1.0, "sta_gamma: x must lie in (0, 1)");
  require(n >= 1, "sta_gamma: n must be >= 1");
  const double L = std::log(x);
  const double r = 2.0 * std::numbers::pi * n / L;
  return std::sqrt(1.0 + r * r);
}

double sta_time(double x, double omega1, int n) {
  require(omega1 > 0.0, "sta_time: omega1 must be > 0");
  return 0.5 * (1.0 - x) / omega1 * sta_gamma(x, n);
}

ScalingTrajectory solve_ermakov(const TrapProtocol& protocol, const ErmakovOptions& opt) {
  if (protocol.kind() == ProtocolKind::sudden)
    throw std::invalid_argument(
        "solve_ermakov: sudden protocols are not integrable; use sudden_quench_q");
  const double tau = protocol.duration();
  require(tau > 0.0, "solve_ermakov: protocol duration must be > 0");
  require(opt.samples >= 2, "solve_ermakov: need at least 2 samples");

  const bool inverted_ok = opt.allow_inverted_trap || protocol.kind() == ProtocolKind::lcd;
  if (!inverted_ok && !protocol.feasible())
    throw InfeasibleProtocol("solve_ermakov: infeasible protocol",
                             *protocol.first_infeasible_time());

  const double w0sq = protocol.omega_squared(0.0);
  require(w0sq > 0.0, "solve_ermakov: omega^2(0) must be > 0");
  const double w0 = std::sqrt(w0sq);

  ScalingTrajectory traj;
  traj.omega0 = w0;
  const std::size_t n = opt.samples;
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i)
    grid[i] = tau * static_cast<double>(i) / static_cast<double>(n - 1);

  traj.times.reserve(n);
  traj.omega_sq.reserve(n);
  traj.b.reserve(n);
  traj.bdot.reserve(n);
  traj.q.reserve(n);
  traj.b_ad.reserve(n);

  auto rhs = [&](double t, const std::array<double, 2>& y) {
    const double b = y[0];
    return std::array<double, 2>{y[1], w0sq / (b * b * b) - protocol.omega_squared(t) * b};
  };
  OdeOptions ode_opt;
  ode_opt.rel_tol = opt.rel_tol;
  ode_opt.abs_tol = opt.abs_tol;

  integrate<2>(
      rhs, grid, {1.0, 0.0},
      [&](std::size_t, double t, const std::array<double, 2>& y) {
        if (!(y[0] > 0.0)) throw OdeError("solve_ermakov: scaling factor hit zero", t);
        const double w2 = protocol.omega_squared(t);
        const double w_ref = protocol.reference_omega(t);
        const double b_ad_sq = w0 / w_ref;  // NaN if the reference is inverted
        traj.times.push_back(t);
        traj.omega_sq.push_back(w2);
        traj.b.push_back(y[0]);
        traj.bdot.push_back(y[1]);
        traj.q.push_back(q_factor_scaled(y[0], y[1], w2, w0, b_ad_sq));
        traj.b_ad.push_back(std::sqrt(b_ad_sq));
      },
      ode_opt);
  return traj;
}

}  // namespace qotto

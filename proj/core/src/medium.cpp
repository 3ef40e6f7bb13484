#include "qotto/medium.hpp"

#include <cmath>
#include <numbers>

namespace qotto {

namespace {

constexpr double kPi2Over6 = std::numbers::pi * std::numbers::pi / 6.0;

// Direct series sum_{j>=1} z^j / j^2, valid (and fast) for z <= 0.5.
double dilog_series(double z) {
  double power = z;
  double sum = z;
  for (int j = 2; j <= 200; ++j) {
    power *= z;
    const double add = power / (static_cast<double>(j) * j);
    sum += add;
    if (add < 1e-18 * sum) break;
  }
  return sum;
}

}  // namespace

double ground_state_energy(const Medium& m, double omega) {
  if (!(omega > 0.0))
    throw std::domain_error("ground_state_energy: omega must be > 0");
  const double n = m.n_particles;
  return 0.5 * omega * n * (1.0 + m.lambda * (n - 1.0));
}

double thermal_energy(const Medium& m, double omega, double beta) {
  if (!(omega > 0.0))
    throw std::domain_error("thermal_energy: omega must be > 0");
  if (!(beta > 0.0))
    throw std::domain_error("thermal_energy: beta must be > 0");
  // Terms shrink with k, so accumulate smallest-first.  expm1 saturates to
  // +inf for large arguments, giving an exact 0 contribution (no overflow).
  double sum = 0.0;
  for (int k = m.n_particles; k >= 1; --k) {
    sum += k / std::expm1(beta * k * omega);
  }
  return ground_state_energy(m, omega) + omega * sum;
}

double dilog(double z) {
  if (!(z >= 0.0 && z <= 1.0))
    throw std::domain_error("dilog: argument outside [0, 1]");
  if (z == 0.0) return 0.0;
  if (z == 1.0) return kPi2Over6;
  if (z <= 0.5) return dilog_series(z);
  // Reflection Li2(z) + Li2(1-z) = pi^2/6 - ln z ln(1-z) keeps the series
  // argument small.
  return kPi2Over6 - std::log(z) * std::log1p(-z) - dilog_series(1.0 - z);
}

double mu_lambda(double lambda, double sigma) {
  if (!(sigma > 0.0))
    throw std::domain_error("mu_lambda: sigma must be > 0");
  double base;
  if (sigma < 0.5) {
    // Expansion of (1/sigma) int_0^sigma s/(e^s - 1) ds; the closed form
    // loses ~log10(1/sigma) digits to cancellation here.  Coefficients are
    // B_{2n} / ((2n)! (2n+1)).
    const double s2 = sigma * sigma;
    base = 1.0 - sigma / 4.0 +
           s2 * (1.0 / 36.0 +
                 s2 * (-1.0 / 3600.0 +
                       s2 * (1.0 / 211680.0 +
                             s2 * (-1.0 / 10886400.0 + s2 * (1.0 / 526901760.0)))));
  } else {
    const double emz = std::exp(-sigma);
    base = kPi2Over6 / sigma + std::log1p(-emz) - dilog(emz) / sigma;
  }
  return base + 0.5 * lambda * sigma;
}

double thermal_energy_approx(const Medium& m, double omega, double beta) {
  if (!(omega > 0.0))
    throw std::domain_error("thermal_energy_approx: omega must be > 0");
  if (!(beta > 0.0))
    throw std::domain_error("thermal_energy_approx: beta must be > 0");
  const double n = m.n_particles;
  const double sigma = n * beta * omega;
  // Riemann estimate of the excitation sum plus the trapezoid endpoint term
  // (the integrand is 0 at sigma only in the limit) and the exact zero-point
  // remainder.  Without these two terms the error floor is omega*N/4.
  const double bulk = n / beta * mu_lambda(m.lambda, sigma);
  const double zero_point = 0.5 * omega * n * (1.0 - m.lambda);
  const double endpoint = (sigma / std::expm1(sigma) - 1.0) / (2.0 * beta);
  return bulk + zero_point + endpoint;
}

}  // namespace qotto

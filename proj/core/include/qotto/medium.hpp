#pragma once

#include <stdexcept>

// Working medium for the Otto engine: N particles in a 1-d harmonic trap with
// inverse-square pair interactions of dimensionless strength lambda.
// lambda = 0 is the ideal Bose gas, lambda = 1 the hard-core (fermionized)
// gas.  Units: hbar = m = 1 throughout.

namespace qotto {

struct Medium {
  int n_particles = 1;
  double lambda = 0.0;

  Medium(int n, double lam) : n_particles(n), lambda(lam) {
    if (n_particles < 1)
      throw std::invalid_argument("Medium: n_particles must be >= 1");
    if (!(lambda >= 0.0))
      throw std::invalid_argument("Medium: lambda must be >= 0");
  }
};

// Cold and hot reservoir inverse temperatures.  beta_h <= beta_c, so the
// temperature ratio a = beta_h / beta_c lies in (0, 1].
struct Reservoirs {
  double beta_c;
  double beta_h;

  Reservoirs(double bc, double bh) : beta_c(bc), beta_h(bh) {
    if (!(beta_c > 0.0) || !(beta_h > 0.0))
      throw std::invalid_argument("Reservoirs: inverse temperatures must be > 0");
    if (beta_h > beta_c)
      throw std::invalid_argument("Reservoirs: requires beta_h <= beta_c (hot means hotter)");
  }

  double temperature_ratio() const { return beta_h / beta_c; }
};

// Ground-state energy (omega/2) N [1 + lambda (N-1)].  The interaction enters
// the spectrum only through this term; the excitation ladder is
// lambda-independent.
double ground_state_energy(const Medium& m, double omega);

// Exact canonical mean energy: ground state plus the finite excitation sum
// omega * sum_{k=1..N} k / (e^{beta k omega} - 1).  No truncation.
double thermal_energy(const Medium& m, double omega, double beta);

// Continuum estimate of thermal_energy built on mu_lambda, including the
// endpoint and zero-point corrections that keep the error O(omega) uniformly
// in sigma = N beta omega.  Relative error <~ sigma^2/N^2 * mu + beta*omega
// against the exact sum.
double thermal_energy_approx(const Medium& m, double omega, double beta);

// Dilogarithm Li_2(z) for z in [0, 1]; absolute accuracy ~1e-15.
// Throws std::domain_error outside [0, 1].
double dilog(double z);

// Scaled-energy deviation function of sigma = N beta omega:
//   mu_lambda(sigma) = pi^2/(6 sigma) + log(1 - e^-sigma)
//                      - Li_2(e^-sigma)/sigma + lambda sigma / 2.
// beta E / N -> mu_lambda(sigma) in the thermodynamic-continuum limit.
// mu -> 1 + lambda sigma/2 as sigma -> 0+; a power-series branch below
// sigma = 0.5 avoids the 1/sigma cancellation of the closed form.
double mu_lambda(double lambda, double sigma);

}  // namespace qotto

#pragma once

#include <cstddef>
#include <vector>

#include "qotto/protocols.hpp"

// Scaling dynamics of the driven trap.  The scaling factor obeys the Ermakov
// equation  bddot + omega^2(t) b = omega^2(0)/b^3  with b(0)=1, bdot(0)=0;
// the nonadiabatic factor
//   Q*(t) = b_ad^2 [ 1/(2 b^2) + omega^2(t) b^2 / (2 omega0^2)
//                    + bdot^2 / (2 omega0^2) ],   b_ad^2 = omega0/omega(t),
// rescales mean energies as <H(t)> = Q*(t)/b_ad^2 <H(0)> and satisfies
// Q* >= 1 whenever the reference frequency is the driving frequency.

namespace qotto {

struct ScalingTrajectory {
  double omega0 = 0.0;  // driving frequency at t = 0
  std::vector<double> times;
  std::vector<double> omega_sq;  // signed driving omega^2(t)
  std::vector<double> b;
  std::vector<double> bdot;
  std::vector<double> q;     // nonadiabatic factor vs. the reference frequency
  std::vector<double> b_ad;  // adiabatic scaling sqrt(omega0/omega_ref(t))

  double final_b() const { return b.back(); }
  double final_bdot() const { return bdot.back(); }
  double final_q() const { return q.back(); }
};

struct ErmakovOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  std::size_t samples = 501;  // uniform output samples including both ends
  // Integrate even when omega^2(t) < 0 somewhere (always on for kind lcd,
  // whose effective frequency legitimately turns imaginary for fast ramps).
  bool allow_inverted_trap = false;
};

// Integrates the Ermakov equation along the protocol.  Throws
// InfeasibleProtocol for an infeasible non-lcd schedule (unless overridden),
// std::invalid_argument for sudden protocols (use sudden_quench_q instead),
// and OdeError on integrator failure.
ScalingTrajectory solve_ermakov(const TrapProtocol& protocol,
                                const ErmakovOptions& opt = {});

// Q* from instantaneous (b, bdot) against a positive driving frequency.
double q_factor(double b, double bdot, double omega_t, double omega0);
// Generalized form taking a signed omega^2 and an explicit b_ad^2 reference.
double q_factor_scaled(double b, double bdot, double omega_sq_t, double omega0,
                       double b_ad_sq);

// Instantaneous quench omega1 -> omega2 = omega1/x:  Q* = (x^2 + 1)/(2x).
double sudden_quench_q(double x);

// Closed-form Q*(tau) of the accidental protocol with frequency ratio
// x = omega1/omega2 and adiabaticity parameter gamma (either direction):
//   gamma < 1: 1 + (cosh(sqrt(1-gamma^2) ln x) - 1)/(1 - gamma^2)
//   gamma = 1: 1 + ln^2 x / 2
//   gamma > 1: 1 + (1 - cos(sqrt(gamma^2-1) ln x))/(gamma^2 - 1)
// A power series in 1 - gamma^2 bridges the branch point smoothly.
// gamma = 0 gives the sudden limit exactly.
double accidental_q_closed(double x, double gamma);

// Classical fundamental solutions of  gddot + omega^2(t) g = 0  for the
// accidental compression in units omega1 = 1 (so t1 = gamma/2 and the stroke
// ends at tau = (1-x) gamma/2):  G1(0)=1, G1dot(0)=0, G2(0)=0, G2dot(0)=1,
// Wronskian G1 G2dot - G1dot G2 = 1.  b = sqrt(G1^2 + omega0^2 G2^2) solves
// the Ermakov equation.
struct FundamentalPair {
  double g1, g1dot, g2, g2dot;
  double wronskian() const { return g1 * g2dot - g1dot * g2; }
};
FundamentalPair fundamental_solutions(double x, double gamma, double t);

// Q* assembled directly from the fundamental solutions:
//   [ (G1dot^2 + omega_t^2 G1^2) + omega0^2 (G2dot^2 + omega_t^2 G2^2) ]
//   / (2 omega0 omega_t).
// Identical to q_factor with b built from the pair whenever the Wronskian
// is +-1.
double husimi_q(const FundamentalPair& pair, double omega0, double omega_t);

// Discrete stroke times where the accidental protocol becomes exactly
// adiabatic-equivalent (Q*(tau_n) = 1):
//   gamma_n = sqrt(1 + 4 pi^2 n^2 / ln^2 x),
//   tau_n = (1-x)/(2 omega1) * gamma_n.
// tau_1 always lies in [1/(2 omega1), pi/omega1].
double sta_gamma(double x, int n);
double sta_time(double x, double omega1, int n);

}  // namespace qotto

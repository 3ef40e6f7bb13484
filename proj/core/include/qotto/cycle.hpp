#pragma once

#include "qotto/ermakov.hpp"
#include "qotto/medium.hpp"
#include "qotto/protocols.hpp"

// Finite-time Otto cycle on the scale-invariant medium.  Strokes:
//   A -> B  unitary compression (omega1 -> omega2), work input W1
//   B -> C  hot isochore at omega2, heat Q2 from the hot bath
//   C -> D  unitary expansion (omega2 -> omega1), work output W3
//   D -> A  cold isochore at omega1, heat Q4 to the cold bath
// Endpoints A and C are thermal; nonadiabaticity enters only through the
// stroke factors Q*_AB and Q*_CD:
//   <H>_B = Q*_AB <H>_A / x,   <H>_D = Q*_CD x <H>_C,   x = omega1/omega2.

namespace qotto {

enum class CycleMode {
  numeric,      // integrate the Ermakov equation along both protocols
  closed_form,  // accidental strokes via the closed-form Q*
  adiabatic,    // Q* = 1
  sudden,       // Q* = (x^2+1)/(2x), zero stroke time
  cd,           // counterdiabatic driving: Q* = 1 at finite stroke time
  lcd,          // local counterdiabatic: endpoint Q* = 1 at finite stroke time
};

const char* to_string(CycleMode m);

struct CycleSpec {
  Medium medium;
  Reservoirs reservoirs;
  double omega1;
  double omega2;
  TrapProtocol compression;  // omega1 -> omega2
  TrapProtocol expansion;    // omega2 -> omega1
  double isochore_overhead = 0.0;  // extra cycle time charged for the isochores

  CycleSpec(Medium m, Reservoirs r, double w1, double w2, TrapProtocol comp,
            TrapProtocol exp, double overhead = 0.0);

  double x() const { return omega1 / omega2; }
};

struct CycleResult {
  // corner energies
  double e_a, e_b, e_c, e_d;
  // energy flows, signed toward the medium
  double w1, q2, w3, q4;
  double w_total;     // net output -(w1 + w3)
  // w_total / q2; NaN unless operating.  The degenerate zero-work boundary
  // a = x (where W = Q2 = 0 and necessarily Q* = 1) reports the continuous
  // limit 1 - x instead of 0/0.
  double efficiency;
  double power;       // w_total / cycle time; NaN if the cycle time is 0
  double q_ab, q_cd;  // stroke nonadiabatic factors
  bool engine;        // q2 > 0 and w_total > 0, or the zero-work boundary
  double cycle_time;
  // context echo for serialization
  double x, a, lambda, tau;
  int n_particles;
};

// Assembles the cycle energetics for the given mode.  Mode closed_form
// requires accidental strokes; numeric integrates whatever feasible
// protocols the spec carries.
CycleResult run_cycle(const CycleSpec& spec, CycleMode mode);

// Net output work from corner data:
//   |W| = (1 - Q*_AB/x) E_A + (1 - x Q*_CD) E_C.
// Positive when the cycle operates as an engine.
double work_total(double e_a, double e_c, double x, double q_ab, double q_cd);

// Sudden-quench floor, Otto ceiling, and the nonadiabatic bound
// eta <= 1 - x Q*_CD.  For monotone driving the ordering
// eta_sudden <= eta <= eta_otto holds for every operating cycle.
struct EfficiencyBounds {
  double eta_sudden;
  double eta_otto;
  double eta_nonadiabatic;
};
EfficiencyBounds efficiency_bounds(const CycleResult& r);

// w_total / cycle_time.  Throws std::domain_error when the cycle time is 0
// (pure sudden cycle with no isochore overhead).
double cycle_power(const CycleResult& r);

}  // namespace qotto

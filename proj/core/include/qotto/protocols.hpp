#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Trap-frequency schedules omega(t) for the unitary strokes, including the
// shortcut constructions: the "accidental" family omega(t) = omega1 t1/(t1-t)
// with constant adiabaticity parameter, smooth polynomial ramps, schedules
// reverse-engineered from a target scaling factor b(t), and the local
// counterdiabatic (LCD) effective frequency built on top of a base schedule.

namespace qotto {

enum class ProtocolKind {
  constant,
  sudden,      // instantaneous quench, duration 0; never integrated
  accidental,  // |omega_dot|/omega^2 held constant
  poly_b,      // inverted from a quintic scaling factor b(t)
  sine_b,      // inverted from a sinusoidal scaling factor b(t)
  poly_omega,  // quintic smoothstep ramp in omega itself
  lcd,         // local counterdiabatic dressing of a base schedule
  tabulated,
};

enum class StrokeDirection { compression, expansion };

const char* to_string(ProtocolKind k);

struct ScheduleSample {
  double t;
  double omega;
  double domega;   // d omega / dt
  double ddomega;  // d^2 omega / dt^2
};

struct InfeasibleProtocol : std::runtime_error {
  double first_bad_t;  // earliest grid time with omega^2 < 0
  InfeasibleProtocol(const std::string& what, double t_bad)
      : std::runtime_error(what + "; first omega^2 < 0 at t = " + std::to_string(t_bad)),
        first_bad_t(t_bad) {}
};

namespace detail {
struct ProtocolModel;
}

// Immutable value wrapper around a concrete schedule.  omega_squared(t) is
// signed: reverse-engineered and LCD schedules may pass through a transient
// inverted trap (omega^2 < 0).  feasible() reports whether omega^2 >= 0 on a
// dense scan grid; for kinds defined directly through a positive omega it is
// true by construction.
class TrapProtocol {
 public:
  ProtocolKind kind() const;
  double duration() const;
  double omega_start() const;
  double omega_end() const;

  double omega_squared(double t) const;
  // sqrt(omega_squared); NaN where the trap is inverted.
  double omega(double t) const;
  // omega with first and second time derivatives.  For kind lcd this reports
  // the *base* schedule (the effective frequency is omega_squared()).
  // Throws std::logic_error for kind sudden.
  ScheduleSample sample(double t) const;
  // Frequency used for the adiabatic reference b_ad = sqrt(omega(0)/omega_ref):
  // the base schedule for lcd, the schedule itself otherwise.
  double reference_omega(double t) const;

  bool feasible() const { return !first_bad_t_.has_value(); }
  std::optional<double> first_infeasible_time() const { return first_bad_t_; }

  // Base schedule of an lcd protocol; nullptr for other kinds.
  const TrapProtocol* base() const;

  // Ordered key/value description (kind plus kind-specific parameters) with
  // round-trip-exact numbers; protocol_from_config() inverts it.
  std::vector<std::pair<std::string, std::string>> config() const;

 private:
  friend TrapProtocol make_protocol(std::shared_ptr<const detail::ProtocolModel> m);
  explicit TrapProtocol(std::shared_ptr<const detail::ProtocolModel> m);
  std::shared_ptr<const detail::ProtocolModel> model_;
  std::optional<double> first_bad_t_;
};

TrapProtocol constant_protocol(double omega, double duration);
TrapProtocol sudden_protocol(double omega1, double omega2);

// omega(t) = omega1 t1/(t1 - t) (compression, omega1 -> omega2 = omega1/x) or
// omega(t) = omega2 t2/(t + t2) (expansion), with t1 = tau/(1-x), t2 = x t1.
// Requires omega1 < omega2; both directions share tau and the adiabaticity
// parameter gamma = 2 omega1 tau / (1 - x).
TrapProtocol accidental_protocol(double omega1, double omega2, double tau,
                                 StrokeDirection dir);

// Quintic smoothstep ramp omega1 -> omega2 with vanishing first and second
// derivatives at both ends.  Monotone, hence always feasible.
TrapProtocol poly_omega_protocol(double omega1, double omega2, double tau);

// Schedules inverted from a target scaling factor via
// omega^2 = omega0^2/b^4 - bddot/b.
TrapProtocol poly_b_protocol(double omega0, double b_ad, double tau);
TrapProtocol sine_b_protocol(double omega0, double b_ad, double t0, int n);

TrapProtocol lcd_protocol(TrapProtocol base);

// Uniform-grid table of (t, omega); cubic interpolation in between, with
// derivatives from the same local 5-point polynomial fit.
TrapProtocol tabulated_protocol(std::vector<double> times, std::vector<double> omegas);

// ---- scaling-factor forms ----

// b(t) = 1 + (b_ad - 1)(10 s^3 - 15 s^4 + 6 s^5), s = t/tau: the minimal
// polynomial with b(0)=1, b(tau)=b_ad and vanishing first/second derivatives
// at both ends.
struct PolynomialScaling {
  double b_ad, tau;
  double a3, a4, a5;  // b = 1 + a3 t^3 + a4 t^4 + a5 t^5
  double b(double t) const;
  double bdot(double t) const;
  double bddot(double t) const;
  double b3dot(double t) const;
  double b4dot(double t) const;
};
PolynomialScaling reverse_engineered_b(double b_ad, double tau);

// b(t) = 1 + beta (sin(t/t0) - t/t0), beta = (1 - b_ad)/(2 pi n), run to
// tau_n = 2 pi n t0.  Same boundary conditions as the quintic, but the
// duration can undercut the feasibility floor of the polynomial form.
struct SinusoidalScaling {
  double b_ad, t0, beta;
  int n;
  double tau() const;
  double b(double t) const;
  double bdot(double t) const;
  double bddot(double t) const;
  double b3dot(double t) const;
  double b4dot(double t) const;
};
SinusoidalScaling sine_b(double b_ad, double t0, int n);

// Inverted trap frequency (signed square) that makes b(t) an exact scaling
// solution: omega^2(t) = omega0^2/b^4 - bddot/b.
double omega_squared_from_b(double b, double bddot, double omega0);

// Smallest tau for which the quintic reverse-engineered schedule stays
// feasible (omega^2 >= 0 everywhere), by bisection on the grid minimum.
// Returns 0 for b_ad = 1.  Absolute tolerance 1e-8/omega0.
double min_feasible_tau(double omega0, double b_ad);

// Adiabaticity parameter gamma = 2 omega1 tau / (1 - x) of the accidental
// family, constant along the stroke.
double gamma_of(double omega1, double tau, double x);

// LCD dressing of a base schedule: effective (signed) frequency squared
//   Omega^2 = omega^2 - (3/4)(omega_dot/omega)^2 + (1/2) omega_ddot/omega
// and the pointwise nonadiabatic factor it realizes,
//   Q* = 1 + (1/4)(omega_ddot/omega^3 - omega_dot^2/omega^4).
double lcd_effective_frequency_sq(const TrapProtocol& base, double t);
double lcd_q_factor(const TrapProtocol& base, double t);

// Full counterdiabatic driving keeps the state in the instantaneous thermal
// manifold: Q* = 1 identically.
constexpr double cd_q_factor() { return 1.0; }

// Rebuild a protocol from config() output.  Keys may carry a prefix (used for
// the nested base of an lcd protocol).  Unknown or missing keys throw
// std::invalid_argument naming the key.
TrapProtocol protocol_from_config(
    const std::vector<std::pair<std::string, std::string>>& kv,
    const std::string& prefix = "");

}  // namespace qotto

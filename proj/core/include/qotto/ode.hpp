#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>

// Adaptive embedded Runge-Kutta integration (Dormand-Prince 5(4)).
// The driver steps exactly onto every requested output time instead of
// interpolating, so sampled states carry full step accuracy; for the small
// systems integrated here the extra step endpoints cost next to nothing.

namespace qotto {

struct OdeError : std::runtime_error {
  double t;  // time at which integration failed
  OdeError(const std::string& what, double t_fail)
      : std::runtime_error(what + " at t = " + std::to_string(t_fail)), t(t_fail) {}
};

struct OdeOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double initial_step = 0.0;  // 0 -> choose automatically
  std::size_t max_steps = 10'000'000;
};

namespace ode_detail {

// Dormand-Prince 5(4) tableau.  Last stage row doubles as the 5th-order
// weights (FSAL); e[] is the difference to the embedded 4th-order weights.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                        a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace ode_detail

// Integrates y' = f(t, y) through the ascending times `t_out` (the first
// entry is the initial time), calling on_sample(i, t_out[i], y) at each.
// f has signature (double t, const std::array<double,N>&) -> std::array<double,N>.
template <std::size_t N, typename F, typename S>
void integrate(F&& f, std::span<const double> t_out, std::array<double, N> y,
               S&& on_sample, const OdeOptions& opt = {}) {
  namespace tb = ode_detail;
  using State = std::array<double, N>;

  if (t_out.size() < 2)
    throw std::invalid_argument("integrate: need at least two output times");
  for (std::size_t i = 1; i < t_out.size(); ++i)
    if (!(t_out[i] > t_out[i - 1]))
      throw std::invalid_argument("integrate: output times must be strictly increasing");

  double t = t_out.front();
  const double t_end = t_out.back();
  State k1 = f(t, y);
  on_sample(std::size_t{0}, t, y);

  // Crude starting step from the initial derivative scale.
  double h = opt.initial_step;
  if (h <= 0.0) {
    double y_scale = 0.0, f_scale = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      y_scale = std::max(y_scale, std::abs(y[i]));
      f_scale = std::max(f_scale, std::abs(k1[i]));
    }
    const double span = t_end - t;
    h = (f_scale > 0.0) ? 0.01 * (y_scale + opt.abs_tol) / f_scale : 0.01 * span;
    h = std::min(h, 0.1 * span);
    h = std::max(h, 1e-12 * span);
  }

  std::size_t next_out = 1;
  std::size_t steps = 0;
  State k2, k3, k4, k5, k6, k7, y_new;

  while (next_out < t_out.size()) {
    if (++steps > opt.max_steps)
      throw OdeError("integrate: exceeded max_steps", t);

    // Clamp onto the next output time without losing the natural step size h.
    const double dist = t_out[next_out] - t;
    const bool hit_output = (h >= dist);
    const double hs = hit_output ? dist : h;
    if (hs <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)))
      throw OdeError("integrate: step size underflow", t);

    State tmp;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + hs * tb::a21 * k1[i];
    k2 = f(t + tb::c2 * hs, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + hs * (tb::a31 * k1[i] + tb::a32 * k2[i]);
    k3 = f(t + tb::c3 * hs, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + hs * (tb::a41 * k1[i] + tb::a42 * k2[i] + tb::a43 * k3[i]);
    k4 = f(t + tb::c4 * hs, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + hs * (tb::a51 * k1[i] + tb::a52 * k2[i] + tb::a53 * k3[i] +
                            tb::a54 * k4[i]);
    k5 = f(t + tb::c5 * hs, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + hs * (tb::a61 * k1[i] + tb::a62 * k2[i] + tb::a63 * k3[i] +
                            tb::a64 * k4[i] + tb::a65 * k5[i]);
    k6 = f(t + hs, tmp);
    for (std::size_t i = 0; i < N; ++i)
      y_new[i] = y[i] + hs * (tb::b1 * k1[i] + tb::b3 * k3[i] + tb::b4 * k4[i] +
                              tb::b5 * k5[i] + tb::b6 * k6[i]);
    k7 = f(t + hs, y_new);

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double ei = hs * (tb::e1 * k1[i] + tb::e3 * k3[i] + tb::e4 * k4[i] +
                              tb::e5 * k5[i] + tb::e6 * k6[i] + tb::e7 * k7[i]);
      const double sc =
          opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err += (ei / sc) * (ei / sc);
    }
    err = std::sqrt(err / N);

    if (!(err <= 1.0)) {  // rejected (or non-finite error): shrink and retry
      if (!std::isfinite(err))
        h = 0.1 * hs;
      else
        h = hs * std::max(0.2, 0.9 * std::pow(err, -0.2));
      continue;
    }

    t += hs;
    y = y_new;
    k1 = k7;  // FSAL
    if (hit_output) {
      t = t_out[next_out];  // kill accumulated roundoff in t
      on_sample(next_out, t, y);
      ++next_out;
    }
    const double grow = (err > 0.0) ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 10.0) : 10.0;
    // A clamped (short) output step must not shrink the natural step size.
    h = std::max(h, hs * grow);
    if (!hit_output) h = hs * grow;
  }
}

}  // namespace qotto

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "qotto/protocols.hpp"

using namespace qotto;

namespace {

// Central finite differences of omega(t), used only to cross-check the
// analytic derivatives reported by sample().
double fd_domega(const TrapProtocol& p, double t, double h) {
  return (p.omega(t + h) - p.omega(t - h)) / (2.0 * h);
}
double fd_ddomega(const TrapProtocol& p, double t, double h) {
  return (p.omega(t + h) - 2.0 * p.omega(t) + p.omega(t - h)) / (h * h);
}

bool message_contains(const std::exception& e, const std::string& needle) {
  return std::string(e.what()).find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("endpoints: schedules start and end at the commanded frequencies") {
  const double w1 = 1.0, w2 = 10.0 / 3.0, tau = 1.5;

  const auto acc_c = accidental_protocol(w1, w2, tau, StrokeDirection::compression);
  CHECK(acc_c.omega_start() == w1);
  CHECK(acc_c.omega_end() == doctest::Approx(w2).epsilon(1e-14));
  CHECK(std::abs(acc_c.omega(0.0) - w1) < 1e-12);
  CHECK(std::abs(acc_c.omega(tau) - w2) < 1e-12);

  const auto acc_e = accidental_protocol(w1, w2, tau, StrokeDirection::expansion);
  CHECK(std::abs(acc_e.omega(0.0) - w2) < 1e-12);
  CHECK(std::abs(acc_e.omega(tau) - w1) < 1e-12);

  const auto pw = poly_omega_protocol(w1, w2, 1.0);
  CHECK(std::abs(pw.omega(0.0) - w1) < 1e-12);
  CHECK(std::abs(pw.omega(1.0) - w2) < 1e-12);
  // smooth ramp: first and second derivatives vanish at both ends
  for (double t : {0.0, 1.0}) {
    const auto s = pw.sample(t);
    CHECK(s.domega == 0.0);
    CHECK(s.ddomega == 0.0);
  }

  const double b_ad = std::sqrt(0.3);
  const double tau_ok = 2.0 * min_feasible_tau(1.0, b_ad);
  const auto pb = poly_b_protocol(1.0, b_ad, tau_ok);
  CHECK(pb.feasible());
  CHECK(std::abs(pb.omega(0.0) - 1.0) < 1e-12);
  CHECK(std::abs(pb.omega(tau_ok) - 1.0 / (b_ad * b_ad)) < 1e-11);

  const auto sb = sine_b_protocol(1.0, b_ad, 0.5, 1);
  CHECK(sb.feasible());
  CHECK(std::abs(sb.omega(0.0) - 1.0) < 1e-12);
  CHECK(std::abs(sb.omega(sb.duration()) - 1.0 / (b_ad * b_ad)) < 1e-11);

  const auto lcd = lcd_protocol(pw);
  CHECK(std::abs(lcd.omega(0.0) - w1) < 1e-12);
  CHECK(std::abs(lcd.omega(1.0) - w2) < 1e-12);
}

TEST_CASE("accidental: frozen midpoint value and constant adiabaticity") {
  const double x = 0.3, w1 = 1.0, w2 = w1 / x, tau = 1.5;
  const auto comp = accidental_protocol(w1, w2, tau, StrokeDirection::compression);
  const auto expn = accidental_protocol(w1, w2, tau, StrokeDirection::expansion);

  // omega(tau/2) = omega1/(1 - (1-x)/2), independent of tau
  CHECK(comp.omega(0.5 * tau) == doctest::Approx(1.538462).epsilon(1e-6));

  const double gamma = gamma_of(w1, tau, x);
  CHECK(gamma == doctest::Approx(2.0 * w1 * tau / (1.0 - x)).epsilon(1e-15));
  for (int i = 1; i < 1000; ++i) {
    const double t = tau * i / 1000.0;
    for (const auto* p : {&comp, &expn}) {
      const auto s = p->sample(t);
      CHECK(std::abs(std::abs(s.domega) / (s.omega * s.omega) - 2.0 / gamma) < 1e-10);
    }
  }
}

TEST_CASE("accidental: expansion mirrors compression and matches its closed rewrite") {
  const double w1 = 0.7, w2 = 2.5, tau = 1.1;
  const auto comp = accidental_protocol(w1, w2, tau, StrokeDirection::compression);
  const auto expn = accidental_protocol(w1, w2, tau, StrokeDirection::expansion);
  for (int i = 0; i <= 200; ++i) {
    const double t = tau * i / 200.0;
    CHECK(expn.omega(t) == doctest::Approx(comp.omega(tau - t)).epsilon(1e-13));
    // algebraic rewrite of the expansion branch
    const double rewrite = w1 * w2 * tau / (w1 * tau + t * (w2 - w1));
    CHECK(expn.omega(t) == doctest::Approx(rewrite).epsilon(1e-13));
  }
}

TEST_CASE("analytic derivatives agree with finite differences of omega(t)") {
  const double b_ad = std::sqrt(0.3);
  const std::vector<TrapProtocol> ps = {
      accidental_protocol(1.0, 10.0 / 3.0, 1.5, StrokeDirection::compression),
      accidental_protocol(1.0, 10.0 / 3.0, 1.5, StrokeDirection::expansion),
      poly_omega_protocol(1.0, 10.0 / 3.0, 1.0),
      poly_b_protocol(1.0, b_ad, 2.0 * min_feasible_tau(1.0, b_ad)),
      sine_b_protocol(1.0, b_ad, 0.5, 1),
  };
  for (const auto& p : ps) {
    const double tau = p.duration();
    const double h = 1e-5 * tau;
    for (double f : {0.15, 0.3, 0.5, 0.62, 0.85}) {
      const double t = f * tau;
      const auto s = p.sample(t);
      const double w_scale = std::max(1.0, s.omega);
      CHECK(std::abs(s.domega - fd_domega(p, t, h)) < 1e-5 * w_scale / tau);
      CHECK(std::abs(s.ddomega - fd_ddomega(p, t, h)) < 1e-3 * w_scale / (tau * tau));
    }
  }
}

TEST_CASE("quintic ramps are monotone between their endpoints") {
  const auto pw = poly_omega_protocol(1.0, 10.0 / 3.0, 0.8);
  double prev = pw.omega(0.0);
  for (int i = 1; i <= 2000; ++i) {
    const double w = pw.omega(0.8 * i / 2000.0);
    CHECK(w >= prev - 1e-12);
    prev = w;
  }

  const auto sc = reverse_engineered_b(std::sqrt(0.3), 2.0);
  prev = sc.b(0.0);
  for (int i = 1; i <= 2000; ++i) {
    const double b = sc.b(2.0 * i / 2000.0);
    CHECK(b <= prev + 1e-12);  // compression target b_ad < 1
    prev = b;
  }
}

TEST_CASE("polynomial scaling: exact boundary values and derivative chain") {
  const double b_ad = 0.6, tau = 1.7;
  const auto sc = reverse_engineered_b(b_ad, tau);
  CHECK(sc.b(0.0) == 1.0);
  CHECK(sc.b(tau) == doctest::Approx(b_ad).epsilon(1e-15));
  CHECK(sc.bdot(0.0) == 0.0);
  CHECK(sc.bdot(tau) == 0.0);
  CHECK(sc.bddot(0.0) == 0.0);
  CHECK(sc.bddot(tau) == 0.0);

  const double h = 1e-6 * tau;
  for (double f : {0.2, 0.45, 0.73}) {
    const double t = f * tau;
    auto fd = [&](auto&& g) { return (g(t + h) - g(t - h)) / (2.0 * h); };
    CHECK(std::abs(sc.bdot(t) - fd([&](double u) { return sc.b(u); })) < 1e-7);
    CHECK(std::abs(sc.bddot(t) - fd([&](double u) { return sc.bdot(u); })) < 1e-6);
    CHECK(std::abs(sc.b3dot(t) - fd([&](double u) { return sc.bddot(u); })) < 1e-5);
    CHECK(std::abs(sc.b4dot(t) - fd([&](double u) { return sc.b3dot(u); })) < 1e-4);
  }
}

TEST_CASE("sinusoidal scaling: boundaries, duration, derivative chain") {
  const double b_ad = 0.4, t0 = 0.3;
  const int n = 2;
  const auto sc = sine_b(b_ad, t0, n);
  const double tau = sc.tau();
  CHECK(tau == doctest::Approx(2.0 * std::numbers::pi * n * t0).epsilon(1e-15));
  CHECK(sc.b(0.0) == 1.0);
  CHECK(sc.b(tau) == doctest::Approx(b_ad).epsilon(1e-12));
  CHECK(std::abs(sc.bdot(0.0)) < 1e-15);
  CHECK(std::abs(sc.bdot(tau)) < 1e-12);
  CHECK(std::abs(sc.bddot(0.0)) < 1e-15);
  CHECK(std::abs(sc.bddot(tau)) < 1e-12);

  const double h = 1e-6;
  for (double f : {0.1, 0.37, 0.81}) {
    const double t = f * tau;
    auto fd = [&](auto&& g) { return (g(t + h) - g(t - h)) / (2.0 * h); };
    CHECK(std::abs(sc.bdot(t) - fd([&](double u) { return sc.b(u); })) < 1e-8);
    CHECK(std::abs(sc.bddot(t) - fd([&](double u) { return sc.bdot(u); })) < 1e-7);
    CHECK(std::abs(sc.b3dot(t) - fd([&](double u) { return sc.bddot(u); })) < 1e-6);
    CHECK(std::abs(sc.b4dot(t) - fd([&](double u) { return sc.b3dot(u); })) < 1e-5);
  }
}

TEST_CASE("inverted frequency from a scaling factor") {
  CHECK(omega_squared_from_b(1.0, 0.0, 2.0) == doctest::Approx(4.0).epsilon(1e-15));
  // signed: a strong bddot inverts the trap
  CHECK(omega_squared_from_b(2.0, 0.5, 1.0) == doctest::Approx(-0.1875).epsilon(1e-12));
  CHECK_THROWS_AS(omega_squared_from_b(0.0, 0.0, 1.0), std::invalid_argument);

  // the protocol built from b reproduces the formula pointwise
  const auto sc = reverse_engineered_b(0.7, 2.0);
  const auto p = poly_b_protocol(1.3, 0.7, 2.0);
  for (double t : {0.1, 0.9, 1.5}) {
    CHECK(p.omega_squared(t) ==
          doctest::Approx(omega_squared_from_b(sc.b(t), sc.bddot(t), 1.3)).epsilon(1e-14));
  }
}

TEST_CASE("feasibility floor of the quintic reverse-engineered schedule") {
  const double b_ad = std::sqrt(0.3);
  const double tau_c = min_feasible_tau(1.0, b_ad);
  CHECK(tau_c > 0.0);
  CHECK(poly_b_protocol(1.0, b_ad, 2.0 * tau_c).feasible());
  CHECK_FALSE(poly_b_protocol(1.0, b_ad, 0.5 * tau_c).feasible());
  CHECK(poly_b_protocol(1.0, b_ad, tau_c + 1e-6).feasible());
  CHECK_FALSE(poly_b_protocol(1.0, b_ad, tau_c - 1e-6).feasible());

  // exactly one infeasible->feasible transition along tau
  int transitions = 0;
  bool prev = poly_b_protocol(1.0, b_ad, 0.05 * tau_c).feasible();
  CHECK_FALSE(prev);
  for (int i = 1; i <= 100; ++i) {
    const double tau = (0.05 + 2.95 * i / 100.0) * tau_c;
    const bool now = poly_b_protocol(1.0, b_ad, tau).feasible();
    if (now != prev) ++transitions;
    prev = now;
  }
  CHECK(prev);
  CHECK(transitions == 1);

  // tau_c scales inversely with the frequency unit
  CHECK(min_feasible_tau(2.0, b_ad) == doctest::Approx(0.5 * tau_c).epsilon(1e-5));
  CHECK(min_feasible_tau(1.0, 1.0) == 0.0);
}

TEST_CASE("sinusoidal schedules: short-time feasibility boundary in alpha") {
  // One-period ramp with t0 = 1/(2 alpha pi), i.e. duration 1/alpha.  The
  // feasible range of alpha widens as the frequency ratio shrinks: the
  // boundary sits near 1.64 at x = 0.1 and approaches ~2.78 as x -> 0.
  auto sine_at = [](double x, double alpha) {
    const double t0 = 1.0 / (2.0 * alpha * std::numbers::pi);
    return sine_b_protocol(1.0, std::sqrt(x), t0, 1);
  };
  CHECK(sine_at(1e-4, 2.0).feasible());
  CHECK(sine_at(1e-4, 2.7).feasible());
  CHECK_FALSE(sine_at(1e-4, 2.8).feasible());
  CHECK(sine_at(0.1, 1.5).feasible());
  CHECK_FALSE(sine_at(0.1, 2.0).feasible());

  // Both reverse-engineered forms reach feasible durations below the
  // shortest shortcut time of the constant-adiabaticity family,
  // tau_1 = (1-x) sqrt(1 + 4 pi^2/ln^2 x) / 2.
  for (double x : {1e-4, 0.1}) {
    const double lx = std::log(x);
    const double tau1 =
        0.5 * (1.0 - x) * std::sqrt(1.0 + 4.0 * std::numbers::pi * std::numbers::pi / (lx * lx));
    const double alpha = (x < 0.01) ? 2.7 : 1.5;
    CAPTURE(x);
    CHECK(sine_at(x, alpha).duration() < tau1);
    CHECK(min_feasible_tau(1.0, std::sqrt(x)) < tau1);
  }
}

TEST_CASE("inverted regions are flagged; omega is NaN there and sampling throws") {
  const double b_ad = std::sqrt(0.3);
  const double tau = 0.4 * min_feasible_tau(1.0, b_ad);
  const auto p = poly_b_protocol(1.0, b_ad, tau);
  CHECK_FALSE(p.feasible());
  REQUIRE(p.first_infeasible_time().has_value());
  const double t_bad = *p.first_infeasible_time();
  CHECK(t_bad > 0.0);
  CHECK(t_bad < tau);
  CHECK(p.omega_squared(t_bad) < 0.0);
  CHECK(std::isnan(p.omega(t_bad)));
  CHECK_THROWS_AS(p.sample(t_bad), InfeasibleProtocol);
  try {
    p.sample(t_bad);
  } catch (const InfeasibleProtocol& e) {
    CHECK(e.first_bad_t == t_bad);
  }
}

TEST_CASE("local counterdiabatic dressing of a smooth ramp") {
  const auto base = poly_omega_protocol(1.0, 10.0 / 3.0, 1.0);
  const auto lcd = lcd_protocol(base);
  CHECK(lcd.kind() == ProtocolKind::lcd);
  CHECK(lcd.duration() == base.duration());
  REQUIRE(lcd.base() != nullptr);
  CHECK(lcd.base()->kind() == ProtocolKind::poly_omega);
  CHECK(base.base() == nullptr);

  for (double t : {0.1, 0.33, 0.5, 0.71, 0.95}) {
    // effective frequency matches the closed formula built from base samples
    const auto s = base.sample(t);
    const double r = s.domega / s.omega;
    const double want = s.omega * s.omega - 0.75 * r * r + 0.5 * s.ddomega / s.omega;
    CHECK(lcd.omega_squared(t) == doctest::Approx(want).epsilon(1e-14));
    CHECK(lcd.omega_squared(t) == doctest::Approx(lcd_effective_frequency_sq(base, t))
                                      .epsilon(1e-15));
    // sample() and reference_omega() report the base schedule
    CHECK(lcd.sample(t).omega == s.omega);
    CHECK(lcd.reference_omega(t) == base.omega(t));
  }

  // vanishing endpoint derivatives make the dressing exact at the ends
  CHECK(lcd_q_factor(base, 0.0) == 1.0);
  CHECK(lcd_q_factor(base, 1.0) == 1.0);
  CHECK(cd_q_factor() == 1.0);

  // a fast base ramp inverts the effective trap somewhere, but remains usable
  const auto fast = lcd_protocol(poly_omega_protocol(1.0, 10.0 / 3.0, 0.05));
  CHECK_FALSE(fast.feasible());
  CHECK(fast.first_infeasible_time().has_value());

  CHECK_THROWS_AS(lcd_protocol(sudden_protocol(1.0, 2.0)), std::invalid_argument);
  CHECK_THROWS_AS(lcd_protocol(lcd_protocol(base)), std::invalid_argument);
}

TEST_CASE("sudden quench carries only its endpoint data") {
  const auto p = sudden_protocol(1.0, 10.0 / 3.0);
  CHECK(p.kind() == ProtocolKind::sudden);
  CHECK(p.duration() == 0.0);
  CHECK(p.omega_start() == 1.0);
  CHECK(p.omega_end() == 10.0 / 3.0);
  CHECK(p.feasible());
  CHECK_THROWS_AS(p.sample(0.0), std::logic_error);
  CHECK_THROWS_AS(p.omega_squared(0.0), std::logic_error);
}

TEST_CASE("tabulated schedules reproduce a smooth source between nodes") {
  const double tau = 1.5;
  const auto src = accidental_protocol(1.0, 10.0 / 3.0, tau, StrokeDirection::compression);
  std::vector<double> ts, ws;
  for (int i = 0; i <= 400; ++i) {
    ts.push_back(tau * i / 400.0);
    ws.push_back(src.omega(ts.back()));
  }
  const auto tab = tabulated_protocol(ts, ws);
  CHECK(tab.kind() == ProtocolKind::tabulated);
  CHECK(tab.duration() == tau);
  for (double f : {0.013, 0.21, 0.444, 0.683, 0.991}) {
    const double t = f * tau;
    CHECK(tab.omega(t) == doctest::Approx(src.omega(t)).epsilon(1e-7));
    const auto got = tab.sample(t);
    const auto want = src.sample(t);
    CHECK(got.domega == doctest::Approx(want.domega).epsilon(1e-4));
    CHECK(got.ddomega == doctest::Approx(want.ddomega).epsilon(1e-2));
  }

  CHECK_THROWS_AS(tabulated_protocol({0.0, 1.0, 2.0, 3.0}, {1.0, 1.0, 1.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(tabulated_protocol({0.0, 1.0, 2.5, 3.0, 4.0}, {1, 1, 1, 1, 1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(tabulated_protocol({0.0, 1.0, 2.0}, {1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(tabulated_protocol({0.0, 1.0, 2.0, 3.0, 4.0}, {1, 1, -1, 1, 1}),
                  std::invalid_argument);
}

TEST_CASE("evaluation domain is [0, duration] with roundoff slack") {
  const auto p = poly_omega_protocol(1.0, 2.0, 1.0);
  CHECK(p.omega(-1e-12) == p.omega(0.0));
  CHECK(p.omega(1.0 + 1e-12) == p.omega(1.0));
  CHECK_THROWS_AS(p.omega(-0.1), std::domain_error);
  CHECK_THROWS_AS(p.omega(1.1), std::domain_error);
}

TEST_CASE("config round-trip is lossless for every kind") {
  const double b_ad = std::sqrt(0.3);
  const std::vector<TrapProtocol> ps = {
      constant_protocol(1.7, 0.9),
      sudden_protocol(1.0, 10.0 / 3.0),
      accidental_protocol(1.0, 10.0 / 3.0, 1.5, StrokeDirection::compression),
      accidental_protocol(1.0, 10.0 / 3.0, 1.5, StrokeDirection::expansion),
      poly_omega_protocol(1.0, 10.0 / 3.0, 1.0),
      poly_b_protocol(1.0, b_ad, 2.0 * min_feasible_tau(1.0, b_ad)),
      sine_b_protocol(1.0, b_ad, 0.5, 2),
      lcd_protocol(poly_omega_protocol(1.0, 10.0 / 3.0, 1.0)),
      tabulated_protocol({0.0, 0.25, 0.5, 0.75, 1.0}, {1.0, 1.1, 1.4, 1.8, 2.0}),
  };
  for (const auto& p : ps) {
    const auto q = protocol_from_config(p.config());
    CAPTURE(to_string(p.kind()));
    CHECK(q.kind() == p.kind());
    CHECK(q.duration() == p.duration());
    CHECK(q.omega_start() == p.omega_start());
    CHECK(q.omega_end() == p.omega_end());
    if (p.kind() == ProtocolKind::sudden) continue;
    for (int i = 0; i <= 7; ++i) {
      const double t = p.duration() * i / 7.0;
      CHECK(q.omega_squared(t) == p.omega_squared(t));
    }
  }
}

TEST_CASE("config errors name the offending key") {
  try {
    protocol_from_config({{"kind", "poly_b"}, {"omega0", "1.0"}, {"tau", "1.0"}});
    FAIL("expected a missing-key error");
  } catch (const std::invalid_argument& e) {
    CHECK(message_contains(e, "b_ad"));
  }
  try {
    protocol_from_config({{"kind", "poly_b"}, {"omega0", "abc"}, {"b_ad", "0.5"}, {"tau", "1"}});
    FAIL("expected a bad-number error");
  } catch (const std::invalid_argument& e) {
    CHECK(message_contains(e, "omega0"));
  }
  try {
    protocol_from_config({{"kind", "frobnicate"}});
    FAIL("expected an unknown-kind error");
  } catch (const std::invalid_argument& e) {
    CHECK(message_contains(e, "frobnicate"));
  }
  try {
    protocol_from_config({{"kind", "accidental"},
                          {"omega1", "1"},
                          {"omega2", "2"},
                          {"tau", "1"},
                          {"direction", "sideways"}});
    FAIL("expected a bad-direction error");
  } catch (const std::invalid_argument& e) {
    CHECK(message_contains(e, "sideways"));
  }
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(constant_protocol(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(constant_protocol(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(sudden_protocol(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(accidental_protocol(2.0, 1.0, 1.0, StrokeDirection::compression),
                  std::invalid_argument);
  CHECK_THROWS_AS(accidental_protocol(1.0, 2.0, 0.0, StrokeDirection::compression),
                  std::invalid_argument);
  CHECK_THROWS_AS(poly_omega_protocol(1.0, 2.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(poly_b_protocol(0.0, 0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(reverse_engineered_b(-0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(sine_b(0.5, 0.3, 0), std::invalid_argument);
  CHECK_THROWS_AS(gamma_of(1.0, 1.0, 1.5), std::invalid_argument);
}

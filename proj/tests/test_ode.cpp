#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qotto/ode.hpp"

using namespace qotto;

namespace {

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i)
    t[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  t.back() = b;
  return t;
}

}  // namespace

TEST_CASE("harmonic oscillator against the exact solution") {
  // y'' = -w^2 y with y(0)=1, y'(0)=0 -> y = cos(w t), y' = -w sin(w t).
  const double w = 2.0;
  auto f = [w](double, const std::array<double, 2>& y) {
    return std::array<double, 2>{y[1], -w * w * y[0]};
  };
  const auto t_out = linspace(0.0, 10.0, 101);
  double max_err = 0.0;
  integrate<2>(f, t_out, {1.0, 0.0}, [&](std::size_t, double t, const std::array<double, 2>& y) {
    max_err = std::max(max_err, std::abs(y[0] - std::cos(w * t)));
    max_err = std::max(max_err, std::abs(y[1] + w * std::sin(w * t)));
  });
  CHECK(max_err < 1e-8);
}

TEST_CASE("dense sampling keeps full step accuracy") {
  // Same oscillator, tenfold more output points: accuracy must not degrade
  // because sample times are hit by shortened steps rather than interpolation.
  const double w = 2.0;
  auto f = [w](double, const std::array<double, 2>& y) {
    return std::array<double, 2>{y[1], -w * w * y[0]};
  };
  const auto t_out = linspace(0.0, 10.0, 1001);
  double max_err = 0.0;
  integrate<2>(f, t_out, {1.0, 0.0}, [&](std::size_t, double t, const std::array<double, 2>& y) {
    max_err = std::max(max_err, std::abs(y[0] - std::cos(w * t)));
  });
  CHECK(max_err < 1e-8);
}

TEST_CASE("samples arrive once per requested time, in order, at exact times") {
  auto f = [](double t, const std::array<double, 1>&) {
    return std::array<double, 1>{std::cos(t)};
  };
  const auto t_out = linspace(0.0, 3.0, 17);
  std::size_t calls = 0;
  integrate<1>(f, t_out, {0.0}, [&](std::size_t i, double t, const std::array<double, 1>& y) {
    CHECK(i == calls);
    CHECK(t == t_out[i]);  // exact, not merely close
    CHECK(std::abs(y[0] - std::sin(t)) < 1e-9);
    ++calls;
  });
  CHECK(calls == t_out.size());
}

TEST_CASE("accuracy tracks the requested tolerance") {
  const double w = 3.0;
  auto f = [w](double, const std::array<double, 2>& y) {
    return std::array<double, 2>{y[1], -w * w * y[0]};
  };
  const auto t_out = linspace(0.0, 20.0, 2);
  auto err_at = [&](double rel, double abs) {
    double e = 0.0;
    OdeOptions opt;
    opt.rel_tol = rel;
    opt.abs_tol = abs;
    integrate<2>(f, t_out, {1.0, 0.0},
                 [&](std::size_t i, double t, const std::array<double, 2>& y) {
                   if (i == 1) e = std::abs(y[0] - std::cos(w * t));
                 },
                 opt);
    return e;
  };
  const double loose = err_at(1e-5, 1e-7);
  const double tight = err_at(1e-12, 1e-14);
  CHECK(loose < 1e-2);
  CHECK(tight < 1e-9);
  CHECK(tight < loose);
}

TEST_CASE("finite-time blow-up raises OdeError near the singularity") {
  // y' = y^2, y(0) = 1 diverges at t = 1; integration cannot get past it.
  auto f = [](double, const std::array<double, 1>& y) {
    return std::array<double, 1>{y[0] * y[0]};
  };
  const auto t_out = linspace(0.0, 2.0, 3);
  bool threw = false;
  try {
    integrate<1>(f, t_out, {1.0}, [](std::size_t, double, const std::array<double, 1>&) {});
  } catch (const OdeError& e) {
    threw = true;
    CHECK(e.t > 0.9);
    CHECK(e.t <= 1.0 + 1e-6);
  }
  CHECK(threw);
}

TEST_CASE("step budget is enforced") {
  auto f = [](double, const std::array<double, 1>& y) {
    return std::array<double, 1>{-y[0]};
  };
  const auto t_out = linspace(0.0, 100.0, 2);
  OdeOptions opt;
  opt.max_steps = 5;
  CHECK_THROWS_AS(
      integrate<1>(f, t_out, {1.0}, [](std::size_t, double, const std::array<double, 1>&) {},
                   opt),
      OdeError);
}

TEST_CASE("output-time validation") {
  auto f = [](double, const std::array<double, 1>& y) {
    return std::array<double, 1>{-y[0]};
  };
  auto sink = [](std::size_t, double, const std::array<double, 1>&) {};
  const std::vector<double> single{0.0};
  CHECK_THROWS_AS(integrate<1>(f, single, {1.0}, sink), std::invalid_argument);
  const std::vector<double> unsorted{0.0, 2.0, 1.0};
  CHECK_THROWS_AS(integrate<1>(f, unsorted, {1.0}, sink), std::invalid_argument);
  const std::vector<double> repeated{0.0, 1.0, 1.0};
  CHECK_THROWS_AS(integrate<1>(f, repeated, {1.0}, sink), std::invalid_argument);
}

TEST_CASE("cost stays proportional to work, not to sample count") {
  // A burst of closely spaced outputs must not wreck the step size for the
  // long smooth stretch that follows.
  auto count_evals = [](const std::vector<double>& t_out) {
    std::size_t evals = 0;
    auto f = [&](double, const std::array<double, 1>& y) {
      ++evals;
      return std::array<double, 1>{-0.1 * y[0]};
    };
    integrate<1>(f, t_out, {1.0}, [](std::size_t, double, const std::array<double, 1>&) {});
    return evals;
  };
  std::vector<double> burst;
  for (int i = 0; i <= 100; ++i) burst.push_back(1e-8 * i);
  burst.push_back(50.0);
  const std::size_t with_burst = count_evals(burst);
  const std::size_t plain = count_evals({0.0, 50.0});
  // ~6 evaluations per forced sample step plus the smooth tail; a controller
  // that restarts from the burst spacing would need far more.
  CHECK(with_burst < 6 * 101 + plain + 200);
}

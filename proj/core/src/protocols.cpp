#include "qotto/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qotto/format.hpp"

namespace qotto {

using ConfigMap = std::vector<std::pair<std::string, std::string>>;

namespace detail {

struct ProtocolModel {
  virtual ~ProtocolModel() = default;
  virtual ProtocolKind kind() const = 0;
  virtual double duration() const = 0;
  virtual double omega_start() const = 0;
  virtual double omega_end() const = 0;
  virtual double omega_squared(double t) const = 0;
  virtual ScheduleSample sample(double t) const = 0;
  virtual double reference_omega(double t) const {
    const double w2 = omega_squared(t);
    return w2 >= 0.0 ? std::sqrt(w2) : std::numeric_limits<double>::quiet_NaN();
  }
  // Kinds defined through a positive omega(t) never need the scan.
  virtual bool needs_feasibility_scan() const = 0;
  virtual const TrapProtocol* base() const { return nullptr; }
  virtual void describe(ConfigMap& out, const std::string& prefix) const = 0;
};

namespace {

void push(ConfigMap& out, const std::string& prefix, const char* key, double v) {
  out.emplace_back(prefix + key, fmt_full(v));
}
void push(ConfigMap& out, const std::string& prefix, const char* key, const std::string& v) {
  out.emplace_back(prefix + key, v);
}

struct ConstantModel final : ProtocolModel {
  double w, tau;
  ConstantModel(double w_, double tau_) : w(w_), tau(tau_) {}
  ProtocolKind kind() const override { return ProtocolKind::constant; }
  double duration() const override { return tau; }
  double omega_start() const override { return w; }
  double omega_end() const override { return w; }
  double omega_squared(double) const override { return w * w; }
  ScheduleSample sample(double t) const override { return {t, w, 0.0, 0.0}; }
  bool needs_feasibility_scan() const override { return false; }
  void describe(ConfigMap& out, const std::string& p) const override {
    push(out, p, "kind", std::string("constant"));
    push(out, p, "omega", w);
    push(out, p, "tau", tau);
  }
};

struct SuddenModel final : ProtocolModel {
  double w1, w2;
  SuddenModel(double w1_, double w2_) : w1(w1_), w2(w2_) {}
  ProtocolKind kind() const override { return ProtocolKind::sudden; }
  double duration() const override { return 0.0; }
  double omega_start() const override { return w1; }
  double omega_end() const override { return w2; }
  double omega_squared(double) const override {
    throw std::logic_error("sudden protocol has no continuous schedule");
  }
  ScheduleSample sample(double) const override {
    throw std::logic_error("sudden protocol has no continuous schedule");
  }
  bool needs_feasibility_scan() const override { return false; }
  void describe(ConfigMap& out, const std::string& p) const override {
    push(out, p, "kind", std::string("sudden"));
    push(out, p, "omega1", w1);
    push(out, p, "omega2", w2);
  }
};

struct AccidentalModel final : ProtocolModel {
  double w1, w2, tau;
  StrokeDirection dir;
  double t1, t2;  // pole offsets: t1 = tau/(1-x), t2 = x t1, x = w1/w2
  AccidentalModel(double w1_, double w2_, double tau_, StrokeDirection d)
      : w1(w1_), w2(w2_), tau(tau_), dir(d) {
    const double x = w1 / w2;
    t1 = tau / (1.0 - x);
    t2 = x * t1;
  }
  ProtocolKind kind() const override { return ProtocolKind::accidental; }
  double duration() const override { return tau; }
  double omega_start() const override {
    return dir == StrokeDirection::compression ? w1 : w2;
  }
  double omega_end() const override {
    return dir == StrokeDirection::compression ? w2 : w1;
  }
  double omega_squared(double t) const override {
    const double w = sample(t).omega;
    return w * w;
  }
  ScheduleSample sample(double t) const override {
    if (dir == StrokeDirection::compression) {
      const double phi = 1.0 - t / t1;  // phi(tau) = x > 0, no pole inside
      const double w = w1 / phi;
      return {t, w, w1 / (t1 * phi * phi), 2.0 * w1 / (t1 * t1 * phi * phi * phi)};
    }
    const double psi = 1.0 + t / t2;
    const double w = w2 / psi;
    return {t, w, -w2 / (t2 * psi * psi), 2.0 * w2 / (t2 * t2 * psi * psi * psi)};
  }
  bool needs_feasibility_scan() const override { return false; }
  void describe(ConfigMap& out, const std::string& p) const override {
    push(out, p, "kind", std::string("accidental"));
    push(out, p, "omega1", w1);
    push(out, p, "omega2", w2);
    push(out, p, "tau", tau);
    push(out, p, "direction",
         std::string(dir == StrokeDirection::compression ? "compression" : "expansion"));
  }
};

struct PolyOmegaModel final : ProtocolModel {
  double w1, w2, tau;
  PolyOmegaModel(double w1_, double w2_, double tau_) : w1(w1_), w2(w2_), tau(tau_) {}
  ProtocolKind kind() const override { return ProtocolKind::poly_omega; }
  double duration() const override { return tau; }
  double omega_start() const override { return w1; }
  double omega_end() const override { return w2; }
  double omega_squared(double t) const override {
    const double w = sample(t).omega;
    return w * w;
  }
  ScheduleSample sample(double t) const override {
    const double s = t / tau;
    const double d = w2 - w1;
    // Factored so both endpoints evaluate exactly.
    const double w = w1 + d * s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
    const double dw = 30.0 * d * s * s * (1.0 - s) * (1.0 - s) / tau;
    const double ddw = 60.0 * d * s * (1.0 - s) * (1.0 - 2.0 * s) / (tau * tau);
    return {t, w, dw, ddw};
  }
  bool needs_feasibility_scan() const override { return false; }
  void describe(ConfigMap& out, const std::string& p) const override {
    push(out, p, "kind", std::string("poly_omega"));
    push(out, p, "omega1", w1);
    push(out, p, "omega2", w2);
    push(out, p, "tau", tau);
  }
};

// Shared machinery for schedules inverted from a scaling factor b(t):
// omega^2 = w0^2/b^4 - bddot/b, with analytic time derivatives of omega where
// the trap is not inverted.
template <typename Scaling>
struct InvertedModelBase : ProtocolModel {
  Scaling sc;
  double w0;
  InvertedModelBase(Scaling s, double w0_) : sc(std::move(s)), w0(w0_) {}
  double omega_start() const override { return w0; }
  double omega_end() const override { return w0 / (sc.b_ad * sc.b_ad); }
  double omega_squared(double t) const override {
    return omega_squared_from_b(sc.b(t), sc.bddot(t), w0);
  }
  ScheduleSample sample(double t) const override {
    const double b = sc.b(t), b1 = sc.bdot(t), b2 = sc.bddot(t), b3 = sc.b3dot(t),
                 b4 = sc.b4dot(t);
    const double w0sq = w0 * w0;
    const double w2 = w0sq / (b * b * b * b) - b2 / b;
    if (!(w2 > 0.0))
      throw InfeasibleProtocol("cannot sample omega of an inverted trap", t);
    const double b5 = b * b * b * b * b;
    const double dw2 = -4.0 * w0sq * b1 / b5 - b3 / b + b2 * b1 / (b * b);
    const double ddw2 = 20.0 * w0sq * b1 * b1 / (b5 * b) - 4.0 * w0sq * b2 / b5 -
                        b4 / b + 2.0 * b3 * b1 / (b * b) + b2 * b2 / (b * b) -
                        2.0 * b2 * b1 * b1 / (b * b * b);
    const double w = std::sqrt(w2);
    const double dw = dw2 / (2.0 * w);
    const double ddw = (ddw2 - 2.0 * dw * dw) / (2.0 * w);
    return {t, w, dw, ddw};
  }
  bool needs_feasibility_scan() const override { return true; }
};

struct PolyBModel final : InvertedModelBase<PolynomialScaling> {
  using InvertedModelBase::InvertedModelBase;
  ProtocolKind kind() const override { return ProtocolKind::poly_b; }
  double duration() const override { return sc.tau; }
  void describe(ConfigMap& out, const std::string& p) const override {
    push(out, p, "kind", std::string("poly_b"));
    push(out, p, "omega0", w0);
    push(out, p, "b_ad", sc.b_ad);
    push(out, p, "tau", sc.tau);
  }
};

struct SineBModel final : InvertedModelBase<SinusoidalScaling> {
  using InvertedModelBase::InvertedModelBase;
  ProtocolKind kind() const override { return ProtocolKind::sine_b; }
  double duration() const override { return sc.tau(); }
  void describe(ConfigMap& out, const std::string& p) const override {
    push(out, p, "kind", std::string("sine_b"));
    push(out, p, "omega0", w0);
    push(out, p, "b_ad", sc.b_ad);
    push(out, p, "t0", sc.t0);
    push(out, p, "n", static_cast<double>(sc.n));
  }
};

struct LcdModel final : ProtocolModel {
  TrapProtocol base_protocol;
  explicit LcdModel(TrapProtocol b) : base_protocol(std::move(b)) {}
  ProtocolKind kind() const override { return ProtocolKind::lcd; }
  double duration() const override { return base_protocol.duration(); }
  double omega_start() const override { return edge_omega(0.0); }
  double omega_end() const override { return edge_omega(duration()); }
  double omega_squared(double t) const override {
    return lcd_effective_frequency_sq(base_protocol, t);
  }
  ScheduleSample sample(double t) const override { return base_protocol.sample(t); }
  double reference_omega(double t) const override { return base_protocol.omega(t); }
  bool needs_feasibility_scan() const override { return true; }
  const TrapProtocol* base() const override { return &base_protocol; }
  void describe(ConfigMap& out, const std::string& p) const override {
    push(out, p, "kind", std::string("lcd"));
    for (auto& [k, v] : base_protocol.config()) out.emplace_back(p + "base." + k, v);
  }

 private:
  double edge_omega(double t) const {
    const double w2 = omega_squared(t);
    return w2 >= 0.0 ? std::sqrt(w2) : std::numeric_limits<double>::quiet_NaN();
  }
};

struct TabulatedModel final : ProtocolModel {
  std::vector<double> ts, ws;
  double dt;
  TabulatedModel(std::vector<double> t, std::vector<double> w)
      : ts(std::move(t)), ws(std::move(w)) {
    dt = ts[1] - ts[0];
  }
  ProtocolKind kind() const override { return ProtocolKind::tabulated; }
  double duration() const override { return ts.back() - ts.front(); }
  double omega_start() const override { return ws.front(); }
  double omega_end() const override { return ws.back(); }
  double omega_squared(double t) const override {
    const double w = sample(t).omega;
    return w * w;
  }
  // Local quartic through the 5 nearest nodes; at the nodes its derivatives
  // reduce to the 4th-order central finite-difference stencils.
  ScheduleSample sample(double t) const override {
    const long n = static_cast<long>(ts.size());
    long j = std::lround((t - ts.front()) / dt);
    j = std::clamp(j, 2L, n - 3);
    // Newton divided differences on nodes j-2 .. j+2.
    double xs[5], c[5];
    for (int i = 0; i < 5; ++i) {
      xs[i] = ts[j - 2 + i];
      c[i] = ws[j - 2 + i];
    }
    for (int lvl = 1; lvl < 5; ++lvl)
      for (int i = 4; i >= lvl; --i)
        c[i] = (c[i] - c[i - 1]) / (xs[i] - xs[i - lvl]);
    // Horner with first and second derivative accumulation.
    double p = c[4], dp = 0.0, ddp = 0.0;
    for (int i = 3; i >= 0; --i) {
      ddp = ddp * (t - xs[i]) + 2.0 * dp;
      dp = dp * (t - xs[i]) + p;
      p = p * (t - xs[i]) + c[i];
    }
    return {t, p, dp, ddp};
  }
  bool needs_feasibility_scan() const override { return false; }
  void describe(ConfigMap& out, const std::string& p) const override {
    push(out, p, "kind", std::string("tabulated"));
    auto join = [](const std::vector<double>& v) {
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += fmt_full(v[i]);
      }
      return s;
    };
    push(out, p, "times", join(ts));
    push(out, p, "omegas", join(ws));
  }
};

}  // namespace
}  // namespace detail

// ---- TrapProtocol wrapper ----

TrapProtocol make_protocol(std::shared_ptr<const detail::ProtocolModel> m) {
  return TrapProtocol(std::move(m));
}

TrapProtocol::TrapProtocol(std::shared_ptr<const detail::ProtocolModel> m)
    : model_(std::move(m)) {
  if (model_->needs_feasibility_scan()) {
    const double tau = model_->duration();
    double w_scale = 1.0;
    for (double w : {model_->omega_start(), model_->omega_end()})
      if (std::isfinite(w)) w_scale = std::max(w_scale, std::abs(w));
    const auto npts = static_cast<std::size_t>(
        std::max(2000.0, std::ceil(200.0 * tau * w_scale)));
    for (std::size_t i = 0; i <= npts; ++i) {
      const double t = tau * static_cast<double>(i) / static_cast<double>(npts);
      if (model_->omega_squared(t) < 0.0) {
        first_bad_t_ = t;
        break;
      }
    }
  }
}

namespace {
double clamp_time(double t, double tau) {
  const double tol = 1e-9 * std::max(tau, 1.0);
  if (t >= 0.0 && t <= tau) return t;
  if (t > -tol && t < 0.0) return 0.0;
  if (t < tau + tol && t > tau) return tau;
  throw std::domain_error("protocol evaluated outside [0, duration]");
}
}  // namespace

ProtocolKind TrapProtocol::kind() const { return model_->kind(); }
double TrapProtocol::duration() const { return model_->duration(); }
double TrapProtocol::omega_start() const { return model_->omega_start(); }
double TrapProtocol::omega_end() const { return model_->omega_end(); }

double TrapProtocol::omega_squared(double t) const {
  return model_->omega_squared(clamp_time(t, model_->duration()));
}

double TrapProtocol::omega(double t) const {
  const double w2 = omega_squared(t);
  return w2 >= 0.0 ? std::sqrt(w2) : std::numeric_limits<double>::quiet_NaN();
}

ScheduleSample TrapProtocol::sample(double t) const {
  return model_->sample(clamp_time(t, model_->duration()));
}

double TrapProtocol::reference_omega(double t) const {
  return model_->reference_omega(clamp_time(t, model_->duration()));
}

const TrapProtocol* TrapProtocol::base() const { return model_->base(); }

std::vector<std::pair<std::string, std::string>> TrapProtocol::config() const {
  ConfigMap out;
  model_->describe(out, "");
  return out;
}

// ---- constructors ----

const char* to_string(ProtocolKind k) {
  switch (k) {
    case ProtocolKind::constant: return "constant";
    case ProtocolKind::sudden: return "sudden";
    case ProtocolKind::accidental: return "accidental";
    case ProtocolKind::poly_b: return "poly_b";
    case ProtocolKind::sine_b: return "sine_b";
    case ProtocolKind::poly_omega: return "poly_omega";
    case ProtocolKind::lcd: return "lcd";
    case ProtocolKind::tabulated: return "tabulated";
  }
  return "?";
}

namespace {
void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}
}  // namespace

TrapProtocol constant_protocol(double omega, double duration) {
  require(omega > 0.0, "constant_protocol: omega must be > 0");
  require(duration > 0.0, "constant_protocol: duration must be > 0");
  return make_protocol(std::make_shared<detail::ConstantModel>(omega, duration));
}

TrapProtocol sudden_protocol(double omega1, double omega2) {
  require(omega1 > 0.0 && omega2 > 0.0, "sudden_protocol: frequencies must be > 0");
  return make_protocol(std::make_shared<detail::SuddenModel>(omega1, omega2));
}

TrapProtocol accidental_protocol(double omega1, double omega2, double tau,
                                 StrokeDirection dir) {
  require(omega1 > 0.0, "accidental_protocol: omega1 must be > 0");
  require(omega2 > omega1, "accidental_protocol: requires omega1 < omega2");
  require(tau > 0.0, "accidental_protocol: tau must be > 0");
  return make_protocol(std::make_shared<detail::AccidentalModel>(omega1, omega2, tau, dir));
}

TrapProtocol poly_omega_protocol(double omega1, double omega2, double tau) {
  require(omega1 > 0.0 && omega2 > 0.0, "poly_omega_protocol: frequencies must be > 0");
  require(tau > 0.0, "poly_omega_protocol: tau must be > 0");
  return make_protocol(std::make_shared<detail::PolyOmegaModel>(omega1, omega2, tau));
}

TrapProtocol poly_b_protocol(double omega0, double b_ad, double tau) {
  require(omega0 > 0.0, "poly_b_protocol: omega0 must be > 0");
  return make_protocol(
      std::make_shared<detail::PolyBModel>(reverse_engineered_b(b_ad, tau), omega0));
}

TrapProtocol sine_b_protocol(double omega0, double b_ad, double t0, int n) {
  require(omega0 > 0.0, "sine_b_protocol: omega0 must be > 0");
  return make_protocol(std::make_shared<detail::SineBModel>(sine_b(b_ad, t0, n), omega0));
}

TrapProtocol lcd_protocol(TrapProtocol base) {
  require(base.kind() != ProtocolKind::sudden && base.kind() != ProtocolKind::lcd,
          "lcd_protocol: base must be a smooth non-lcd schedule");
  return make_protocol(std::make_shared<detail::LcdModel>(std::move(base)));
}

TrapProtocol tabulated_protocol(std::vector<double> times, std::vector<double> omegas) {
  require(times.size() == omegas.size(), "tabulated_protocol: size mismatch");
  require(times.size() >= 5, "tabulated_protocol: need at least 5 samples");
  const double dt = times[1] - times[0];
  require(dt > 0.0, "tabulated_protocol: times must increase");
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double step = times[i] - times[i - 1];
    require(std::abs(step - dt) <= 1e-9 * dt, "tabulated_protocol: grid must be uniform");
  }
  for (double w : omegas)
    require(w > 0.0, "tabulated_protocol: omegas must be > 0");
  return make_protocol(
      std::make_shared<detail::TabulatedModel>(std::move(times), std::move(omegas)));
}

// ---- scaling-factor forms ----

PolynomialScaling reverse_engineered_b(double b_ad, double tau) {
  require(b_ad > 0.0, "reverse_engineered_b: b_ad must be > 0");
  require(tau > 0.0, "reverse_engineered_b: tau must be > 0");
  const double d = b_ad - 1.0;
  const double t3 = tau * tau * tau;
  return {b_ad, tau, 10.0 * d / t3, -15.0 * d / (t3 * tau), 6.0 * d / (t3 * tau * tau)};
}

double PolynomialScaling::b(double t) const {
  const double s = t / tau;
  return 1.0 + (b_ad - 1.0) * s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}
double PolynomialScaling::bdot(double t) const {
  const double s = t / tau;
  return 30.0 * (b_ad - 1.0) * s * s * (1.0 - s) * (1.0 - s) / tau;
}
double PolynomialScaling::bddot(double t) const {
  const double s = t / tau;
  return 60.0 * (b_ad - 1.0) * s * (1.0 - s) * (1.0 - 2.0 * s) / (tau * tau);
}
double PolynomialScaling::b3dot(double t) const {
  const double s = t / tau;
  return 60.0 * (b_ad - 1.0) * (1.0 + 6.0 * s * (s - 1.0)) / (tau * tau * tau);
}
double PolynomialScaling::b4dot(double t) const {
  const double s = t / tau;
  return 360.0 * (b_ad - 1.0) * (2.0 * s - 1.0) / (tau * tau * tau * tau);
}

SinusoidalScaling sine_b(double b_ad, double t0, int n) {
  require(b_ad > 0.0, "sine_b: b_ad must be > 0");
  require(t0 > 0.0, "sine_b: t0 must be > 0");
  require(n >= 1, "sine_b: n must be >= 1");
  return {b_ad, t0, (1.0 - b_ad) / (2.0 * std::numbers::pi * n), n};
}

double SinusoidalScaling::tau() const { return 2.0 * std::numbers::pi * n * t0; }
double SinusoidalScaling::b(double t) const {
  const double u = t / t0;
  return 1.0 + beta * (std::sin(u) - u);
}
double SinusoidalScaling::bdot(double t) const {
  return beta * (std::cos(t / t0) - 1.0) / t0;
}
double SinusoidalScaling::bddot(double t) const {
  return -beta * std::sin(t / t0) / (t0 * t0);
}
double SinusoidalScaling::b3dot(double t) const {
  return -beta * std::cos(t / t0) / (t0 * t0 * t0);
}
double SinusoidalScaling::b4dot(double t) const {
  return beta * std::sin(t / t0) / (t0 * t0 * t0 * t0);
}

double omega_squared_from_b(double b, double bddot, double omega0) {
  require(b > 0.0, "omega_squared_from_b: b must be > 0");
  const double r = omega0 / (b * b);
  return r * r - bddot / b;
}

double min_feasible_tau(double omega0, double b_ad) {
  require(omega0 > 0.0, "min_feasible_tau: omega0 must be > 0");
  require(b_ad > 0.0, "min_feasible_tau: b_ad must be > 0");
  if (b_ad == 1.0) return 0.0;  // b == 1 identically: any tau works
  auto feasible = [&](double tau) {
    return poly_b_protocol(omega0, b_ad, tau).feasible();
  };
  double hi = 1.0 / omega0;
  while (!feasible(hi)) {
    hi *= 2.0;
    if (hi > 1e9 / omega0)
      throw std::runtime_error("min_feasible_tau: no feasible tau found");
  }
  double lo = 0.5 * hi;
  while (feasible(lo)) {
    hi = lo;
    lo *= 0.5;
    if (lo < 1e-12 / omega0) return 0.0;
  }
  while (hi - lo > 1e-8 / omega0) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double gamma_of(double omega1, double tau, double x) {
  require(omega1 > 0.0, "gamma_of: omega1 must be > 0");
  require(tau > 0.0, "gamma_of: tau must be > 0");
  require(x > 0.0 && x < 1.0, "gamma_of: x must lie in (0, 1)");
  return 2.0 * omega1 * tau / (1.0 - x);
}

double lcd_effective_frequency_sq(const TrapProtocol& base, double t) {
  const ScheduleSample s = base.sample(t);
  require(s.omega > 0.0, "lcd_effective_frequency_sq: base omega must be > 0");
  const double r = s.domega / s.omega;
  return s.omega * s.omega - 0.75 * r * r + 0.5 * s.ddomega / s.omega;
}

double lcd_q_factor(const TrapProtocol& base, double t) {
  const ScheduleSample s = base.sample(t);
  require(s.omega > 0.0, "lcd_q_factor: base omega must be > 0");
  const double w2 = s.omega * s.omega;
  return 1.0 + 0.25 * (s.ddomega * s.omega - s.domega * s.domega) / (w2 * w2);
}

// ---- config round-trip ----

namespace {

std::string find_key(const ConfigMap& kv, const std::string& key) {
  for (const auto& [k, v] : kv)
    if (k == key) return v;
  throw std::invalid_argument("protocol config: missing key '" + key + "'");
}

double find_num(const ConfigMap& kv, const std::string& key) {
  const std::string v = find_key(kv, key);
  try {
    std::size_t used = 0;
    const double r = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    throw std::invalid_argument("protocol config: bad number for '" + key + "': " + v);
  }
}

std::vector<double> split_nums(const std::string& s, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(find_num({{key, item}}, key));
  return out;
}

}  // namespace

TrapProtocol protocol_from_config(const ConfigMap& kv, const std::string& prefix) {
  auto key = [&](const char* k) { return prefix + k; };
  const std::string kind = find_key(kv, key("kind"));
  if (kind == "constant")
    return constant_protocol(find_num(kv, key("omega")), find_num(kv, key("tau")));
  if (kind == "sudden")
    return sudden_protocol(find_num(kv, key("omega1")), find_num(kv, key("omega2")));
  if (kind == "accidental") {
    const std::string dir = find_key(kv, key("direction"));
    if (dir != "compression" && dir != "expansion")
      throw std::invalid_argument("protocol config: bad direction '" + dir + "'");
    return accidental_protocol(find_num(kv, key("omega1")), find_num(kv, key("omega2")),
                               find_num(kv, key("tau")),
                               dir == "compression" ? StrokeDirection::compression
                                                    : StrokeDirection::expansion);
  }
  if (kind == "poly_omega")
    return poly_omega_protocol(find_num(kv, key("omega1")), find_num(kv, key("omega2")),
                               find_num(kv, key("tau")));
  if (kind == "poly_b")
    return poly_b_protocol(find_num(kv, key("omega0")), find_num(kv, key("b_ad")),
                           find_num(kv, key("tau")));
  if (kind == "sine_b")
    return sine_b_protocol(find_num(kv, key("omega0")), find_num(kv, key("b_ad")),
                           find_num(kv, key("t0")),
                           static_cast<int>(find_num(kv, key("n"))));
  if (kind == "lcd") return lcd_protocol(protocol_from_config(kv, prefix + "base."));
  if (kind == "tabulated")
    return tabulated_protocol(split_nums(find_key(kv, key("times")), key("times")),
                              split_nums(find_key(kv, key("omegas")), key("omegas")));
  throw std::invalid_argument("protocol config: unknown kind '" + kind + "'");
}

}  // namespace qotto

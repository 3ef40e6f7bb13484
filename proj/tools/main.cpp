// qotto: finite-time quantum Otto cycles with a scale-invariant interacting
// working medium.  Subcommands cover single-stroke traces, cycle energetics,
// work optimization, parameter sweeps, shortcut stroke times, and canned
// figure data sets.
//
// Parameter precedence: built-in defaults < --config file < flags.  All
// output is byte-reproducible for identical inputs.

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "qotto/cycle.hpp"
#include "qotto/ermakov.hpp"
#include "qotto/io.hpp"
#include "qotto/medium.hpp"
#include "qotto/ode.hpp"
#include "qotto/optimize.hpp"
#include "qotto/protocols.hpp"

namespace {

using namespace qotto;

constexpr double kPi = 3.14159265358979323846;

// ---- resolved run parameters (defaults mirror the bundled figure data) ----

struct Params {
  double x = 0.3;
  double omega1 = 1.0;
  std::optional<double> omega2;  // alternative to x
  double tau = 1.5;
  bool tau_explicit = false;
  int n = 500;
  double lambda = 0.0;
  std::optional<double> beta_c;
  std::optional<double> sigma_c;  // alternative to beta_c
  double beta_c_eff = 0.002;
  double a = 0.3;
  std::string protocol = "accidental";
  std::string mode = "numeric";
  std::string preset;
  std::string grid;
  std::string axis = "tau";
  int n_max = 5;
  std::string format = "csv";
  io::OutputFormat fmt = io::OutputFormat::csv;
  std::string out;
};

double parse_double(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE)
    throw std::invalid_argument("invalid number for '" + key + "': '" + text + "'");
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE ||
      v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw std::invalid_argument("invalid integer for '" + key + "': '" + text + "'");
  return static_cast<int>(v);
}

// Canonical parameter keys; config files may also say n_particles for n.
const std::set<std::string>& allowed_keys() {
  static const std::set<std::string> keys = {
      "x",    "omega1",   "omega2", "tau",  "n",      "lambda", "beta_c", "sigma_c",
      "a",    "protocol", "mode",   "preset", "grid", "axis",   "n_max",  "format",
      "out"};
  return keys;
}

std::string canon(const std::string& key) {
  return key == "n_particles" ? std::string("n") : key;
}

void apply(Params& p, const std::string& key, const std::string& value) {
  if (key == "x") p.x = parse_double(key, value);
  else if (key == "omega1") p.omega1 = parse_double(key, value);
  else if (key == "omega2") p.omega2 = parse_double(key, value);
  else if (key == "tau") { p.tau = parse_double(key, value); p.tau_explicit = true; }
  else if (key == "n") p.n = parse_int(key, value);
  else if (key == "lambda") p.lambda = parse_double(key, value);
  else if (key == "beta_c") p.beta_c = parse_double(key, value);
  else if (key == "sigma_c") p.sigma_c = parse_double(key, value);
  else if (key == "a") p.a = parse_double(key, value);
  else if (key == "protocol") p.protocol = value;
  else if (key == "mode") p.mode = value;
  else if (key == "preset") p.preset = value;
  else if (key == "grid") p.grid = value;
  else if (key == "axis") p.axis = value;
  else if (key == "n_max") p.n_max = parse_int(key, value);
  else if (key == "format") p.format = value;
  else if (key == "out") p.out = value;
  else throw std::invalid_argument("unknown key '" + key + "'");
}

void finalize(Params& p) {
  if (!(p.omega1 > 0.0)) throw std::invalid_argument("omega1 must be > 0");
  if (p.omega2) {
    if (!(*p.omega2 > 0.0)) throw std::invalid_argument("omega2 must be > 0");
    p.x = p.omega1 / *p.omega2;
    if (!(p.x > 0.0 && p.x < 1.0))
      throw std::invalid_argument("x = omega1/omega2 = " + fmt9(p.x) +
                                  " must lie in (0, 1); need omega2 > omega1");
  }
  if (!(p.x > 0.0 && p.x < 1.0)) throw std::invalid_argument("x must lie in (0, 1)");
  if (!(p.tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  if (p.n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(p.lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  if (p.sigma_c) {
    if (!(*p.sigma_c > 0.0)) throw std::invalid_argument("sigma_c must be > 0");
    p.beta_c_eff = *p.sigma_c / (p.n * p.omega1);
  } else if (p.beta_c) {
    p.beta_c_eff = *p.beta_c;
  }
  if (!(p.beta_c_eff > 0.0)) throw std::invalid_argument("beta_c must be > 0");
  if (!(p.a > 0.0 && p.a <= 1.0))
    throw std::invalid_argument("a = beta_h/beta_c must lie in (0, 1]");
  if (p.n_max < 1) throw std::invalid_argument("n-max must be >= 1");
  p.fmt = io::parse_format(p.format);
}

CycleMode parse_mode(const std::string& name) {
  if (name == "numeric") return CycleMode::numeric;
  if (name == "closed_form") return CycleMode::closed_form;
  if (name == "adiabatic") return CycleMode::adiabatic;
  if (name == "sudden") return CycleMode::sudden;
  if (name == "cd") return CycleMode::cd;
  if (name == "lcd") return CycleMode::lcd;
  throw std::invalid_argument("unknown mode '" + name +
                              "' (use numeric, closed_form, adiabatic, sudden, cd, lcd)");
}

SweepAxis parse_axis(const std::string& name) {
  if (name == "a") return SweepAxis::temperature_ratio;
  if (name == "tau") return SweepAxis::stroke_time;
  if (name == "lambda") return SweepAxis::interaction;
  if (name == "n") return SweepAxis::particle_number;
  throw std::invalid_argument("unknown axis '" + name + "' (use a, tau, lambda, n)");
}

std::vector<double> parse_grid(const std::string& spec) {
  const auto c1 = spec.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : spec.find(':', c1 + 1);
  if (c2 == std::string::npos || spec.find(':', c2 + 1) != std::string::npos)
    throw std::invalid_argument("grid must be start:stop:count (got '" + spec + "')");
  const double start = parse_double("grid start", spec.substr(0, c1));
  const double stop = parse_double("grid stop", spec.substr(c1 + 1, c2 - c1 - 1));
  const int count = parse_int("grid count", spec.substr(c2 + 1));
  if (count < 1) throw std::invalid_argument("grid count must be >= 1");
  if (count == 1) return {start};
  std::vector<double> out(static_cast<std::size_t>(count));
  const double step = (stop - start) / (count - 1);
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = start + step * i;
  out.back() = stop;
  return out;
}

std::string default_sweep_grid(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::temperature_ratio: return "0.05:0.95:19";
    case SweepAxis::stroke_time: return "0.1:5:50";
    case SweepAxis::interaction: return "0:2:3";
    case SweepAxis::particle_number: return "10:500:50";
  }
  throw std::logic_error("unhandled axis");
}

void write_out(const Params& p, const std::string& content) {
  if (p.out.empty()) {
    std::fwrite(content.data(), 1, content.size(), stdout);
    return;
  }
  std::ofstream f(p.out, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open output file '" + p.out + "'");
  f << content;
  if (!f) throw std::runtime_error("failed writing output file '" + p.out + "'");
}

std::string render(const Params& p, const std::vector<io::Record>& recs,
                   const std::string& preamble = "") {
  return p.fmt == io::OutputFormat::csv ? io::to_csv(recs, preamble) : io::to_json(recs);
}

// ---- stroke construction ----

// Compression runs omega1 -> omega2 = omega1/x, expansion the reverse; both
// share the stroke time tau.
TrapProtocol build_stroke(const std::string& kind, double omega1, double x, double tau,
                          StrokeDirection dir) {
  const double w2 = omega1 / x;
  const bool comp = dir == StrokeDirection::compression;
  if (kind == "accidental") return accidental_protocol(omega1, w2, tau, dir);
  if (kind == "poly_omega")
    return comp ? poly_omega_protocol(omega1, w2, tau) : poly_omega_protocol(w2, omega1, tau);
  if (kind == "poly_b")
    return poly_b_protocol(comp ? omega1 : w2, comp ? std::sqrt(x) : 1.0 / std::sqrt(x), tau);
  if (kind == "sine_b")
    return sine_b_protocol(comp ? omega1 : w2, comp ? std::sqrt(x) : 1.0 / std::sqrt(x),
                           tau / (2.0 * kPi), 1);
  if (kind == "lcd")
    return lcd_protocol(comp ? poly_omega_protocol(omega1, w2, tau)
                             : poly_omega_protocol(w2, omega1, tau));
  throw std::invalid_argument("unknown protocol '" + kind +
                              "' (use accidental, poly_omega, poly_b, sine_b, lcd)");
}

ProtocolBuilder family_builder(const Params& p) {
  const std::string kind = p.protocol;
  const double omega1 = p.omega1;
  const double tau = p.tau;
  return [kind, omega1, tau](double x, StrokeDirection dir) {
    return build_stroke(kind, omega1, x, tau, dir);
  };
}

std::vector<io::Record> trajectory_records(const ScalingTrajectory& traj,
                                           const TrapProtocol& proto) {
  const bool lcd = proto.kind() == ProtocolKind::lcd;
  std::vector<io::Record> out;
  out.reserve(traj.times.size());
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double t = traj.times[i];
    io::Record r;
    r.add("t", t);
    r.add("omega", proto.reference_omega(t));
    r.add("b", traj.b[i]);
    r.add("bdot", traj.bdot[i]);
    r.add("q", traj.q[i]);
    r.add("b_ad", traj.b_ad[i]);
    if (lcd) {
      const double w2 = traj.omega_sq[i];
      r.add("omega_eff",
            w2 >= 0.0 ? std::sqrt(w2) : std::numeric_limits<double>::quiet_NaN());
      r.add("q_lcd", lcd_q_factor(*proto.base(), t));
    }
    out.push_back(std::move(r));
  }
  return out;
}

// ---- subcommands ----

int cmd_protocol(const Params& p) {
  if (p.protocol == "sudden")
    throw std::invalid_argument("sudden protocols have no time trace");
  const TrapProtocol proto = p.protocol == "constant"
                                 ? constant_protocol(p.omega1, p.tau)
                                 : build_stroke(p.protocol, p.omega1, p.x, p.tau,
                                                StrokeDirection::compression);
  ErmakovOptions opt;
  opt.samples = 201;
  const ScalingTrajectory traj = solve_ermakov(proto, opt);
  if (p.fmt == io::OutputFormat::csv)
    write_out(p, io::trajectory_csv(traj, proto));
  else
    write_out(p, io::to_json(trajectory_records(traj, proto)));
  return 0;
}

int cmd_cycle(const Params& p) {
  const CycleMode mode = parse_mode(p.mode);
  const CycleSpec spec(Medium(p.n, p.lambda),
                       Reservoirs(p.beta_c_eff, p.a * p.beta_c_eff), p.omega1,
                       p.omega1 / p.x,
                       build_stroke(p.protocol, p.omega1, p.x, p.tau,
                                    StrokeDirection::compression),
                       build_stroke(p.protocol, p.omega1, p.x, p.tau,
                                    StrokeDirection::expansion));
  const CycleResult r = run_cycle(spec, mode);
  const io::Record rec = io::to_record(r);
  write_out(p, p.fmt == io::OutputFormat::csv ? io::to_csv({rec}) : io::to_json(rec));
  if (!r.engine) {
    std::fprintf(stderr, "cycle does not operate as an engine (w_total = %s, q2 = %s)\n",
                 fmt9(r.w_total).c_str(), fmt9(r.q2).c_str());
    return 2;
  }
  return 0;
}

int cmd_optimize(const Params& p) {
  const CycleMode mode = parse_mode(p.mode);
  const EngineParams ep{Medium(p.n, p.lambda),
                        Reservoirs(p.beta_c_eff, p.a * p.beta_c_eff), p.omega1, 0.0};
  OptimizationResult o;
  if (mode == CycleMode::numeric && p.protocol != "accidental") {
    const ProtocolBuilder builder = family_builder(p);
    o = optimize_x(ep, mode, p.tau, builder);
  } else {
    o = optimize_x(ep, mode, p.tau);
  }
  const io::Record rec = io::to_record(o);
  write_out(p, p.fmt == io::OutputFormat::csv ? io::to_csv({rec}) : io::to_json(rec));
  if (!o.operating) {
    std::fprintf(stderr, "no operating compression ratio (best x = %s)\n",
                 fmt9(o.x_opt).c_str());
    return 2;
  }
  return 0;
}

int cmd_sweep(const Params& p) {
  const CycleMode mode = parse_mode(p.mode);
  if (mode == CycleMode::numeric && p.protocol != "accidental")
    throw std::invalid_argument(
        "sweep integrates only the accidental family in numeric mode");
  const SweepAxis axis = parse_axis(p.axis);
  const std::vector<double> values =
      parse_grid(p.grid.empty() ? default_sweep_grid(axis) : p.grid);
  const EngineParams base{Medium(p.n, p.lambda),
                          Reservoirs(p.beta_c_eff, p.a * p.beta_c_eff), p.omega1, 0.0};
  const SweepResult sw = max_power_sweep(base, mode, p.tau, axis, values);
  const std::vector<io::Record> recs = io::sweep_records(sw);
  if (p.fmt == io::OutputFormat::csv)
    write_out(p, io::to_csv(recs, io::sweep_preamble(sw)));
  else
    write_out(p, io::to_json(recs));
  const bool any = std::any_of(sw.points.begin(), sw.points.end(),
                               [](const SweepPoint& q) { return q.opt.operating; });
  if (!any) {
    std::fprintf(stderr, "no operating point on the sweep grid\n");
    return 2;
  }
  return 0;
}

int cmd_sta_times(const Params& p) {
  std::vector<io::Record> recs;
  recs.reserve(static_cast<std::size_t>(p.n_max));
  for (int k = 1; k <= p.n_max; ++k) {
    io::Record r;
    r.add("n", k);
    r.add("tau", sta_time(p.x, p.omega1, k));
    r.add("gamma", sta_gamma(p.x, k));
    recs.push_back(std::move(r));
  }
  const double tau1 = sta_time(p.x, p.omega1, 1);
  const double lo = 0.5 / p.omega1;
  const double hi = kPi / p.omega1;
  const bool ok = tau1 >= lo && tau1 <= hi;
  std::string body = render(p, recs);
  if (p.fmt == io::OutputFormat::csv)
    body += "# tau_1 = " + fmt9(tau1) + " lies in [" + fmt9(lo) + ", " +
            fmt9(hi) + "]: " + (ok ? "yes" : "NO") + "\n";
  write_out(p, body);
  if (!ok) {
    std::fprintf(stderr, "tau_1 = %s violates [%s, %s]\n", fmt9(tau1).c_str(),
                 fmt9(lo).c_str(), fmt9(hi).c_str());
    return 3;
  }
  return 0;
}

// ---- figure presets ----

int figure_q_vs_t(const Params& p) {
  // Default stroke time: the first shortcut time, where the accidental
  // drive lands exactly adiabatically.
  const double tau = p.tau_explicit ? p.tau : sta_time(p.x, p.omega1, 1);
  const double w2 = p.omega1 / p.x;
  ErmakovOptions opt;
  opt.samples = 201;
  const ScalingTrajectory acc = solve_ermakov(
      accidental_protocol(p.omega1, w2, tau, StrokeDirection::compression), opt);
  const ScalingTrajectory lcd =
      solve_ermakov(lcd_protocol(poly_omega_protocol(p.omega1, w2, tau)), opt);
  std::vector<io::Record> recs;
  recs.reserve(3 * acc.times.size());
  auto add = [&recs](const char* curve, double t, double q) {
    io::Record r;
    r.add("curve", std::string(curve));
    r.add("t", t);
    r.add("q", q);
    recs.push_back(std::move(r));
  };
  for (std::size_t i = 0; i < acc.times.size(); ++i)
    add("acc", acc.times[i], acc.q[i]);
  for (std::size_t i = 0; i < acc.times.size(); ++i) add("cd", acc.times[i], 1.0);
  for (std::size_t i = 0; i < lcd.times.size(); ++i)
    add("lcd", lcd.times[i], lcd.q[i]);
  const std::string preamble = "# preset = q-vs-t, x = " + fmt9(p.x) +
                               ", omega1 = " + fmt9(p.omega1) +
                               ", tau = " + fmt9(tau) + "\n";
  write_out(p, render(p, recs, preamble));
  return 0;
}

int figure_q_vs_tau(const Params& p) {
  const std::vector<double> taus = parse_grid(p.grid.empty() ? "0.05:10:200" : p.grid);
  std::vector<io::Record> recs;
  recs.reserve(3 * taus.size());
  auto add = [&recs](const char* curve, double tau, double q) {
    io::Record r;
    r.add("curve", std::string(curve));
    r.add("tau", tau);
    r.add("q", q);
    recs.push_back(std::move(r));
  };
  // Counterdiabatic driving reaches q = 1 at every stroke time; the local
  // variant shares the endpoint value.
  for (const double tau : taus)
    add("acc", tau, accidental_q_closed(p.x, gamma_of(p.omega1, tau, p.x)));
  for (const double tau : taus) add("cd", tau, 1.0);
  for (const double tau : taus) add("lcd", tau, 1.0);
  const std::string preamble = "# preset = q-vs-tau, x = " + fmt9(p.x) +
                               ", omega1 = " + fmt9(p.omega1) + "\n";
  write_out(p, render(p, recs, preamble));
  return 0;
}

int figure_eff_vs_a(const Params& p) {
  const std::vector<double> as = parse_grid(p.grid.empty() ? "0.02:0.98:49" : p.grid);
  const double lambdas[] = {0.0, 1.0, 2.0};
  const std::pair<const char*, CycleMode> curves[] = {
      {"acc", CycleMode::closed_form},
      {"sq", CycleMode::sudden},
      {"ad", CycleMode::adiabatic},
  };
  std::vector<io::Record> recs;
  recs.reserve(3 * 3 * as.size());
  for (const auto& [curve, mode] : curves) {
    for (const double lam : lambdas) {
      for (const double a : as) {
        const EngineParams ep{Medium(p.n, lam),
                              Reservoirs(p.beta_c_eff, a * p.beta_c_eff), p.omega1,
                              0.0};
        const OptimizationResult o = optimize_x(ep, mode, p.tau);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        io::Record r;
        r.add("curve", std::string(curve));
        r.add("lambda", lam);
        r.add("a", a);
        r.add("x_opt", o.operating ? o.x_opt : nan);
        r.add("efficiency", o.operating ? o.efficiency : nan);
        recs.push_back(std::move(r));
      }
    }
  }
  const std::string preamble =
      "# preset = eff-vs-a, tau = " + fmt9(p.tau) + ", n_particles = " +
      fmt9(p.n) + ", beta_c = " + fmt9(p.beta_c_eff) + ", omega1 = " +
      fmt9(p.omega1) + "\n";
  write_out(p, render(p, recs, preamble));
  return 0;
}

int figure_eff_vs_tau(const Params& p) {
  const std::vector<double> taus = parse_grid(p.grid.empty() ? "0.1:5:99" : p.grid);
  const std::pair<const char*, CycleMode> curves[] = {
      {"acc", CycleMode::closed_form},
      {"ad", CycleMode::adiabatic},
      {"sq", CycleMode::sudden},
  };
  const EngineParams ep{Medium(p.n, p.lambda),
                        Reservoirs(p.beta_c_eff, p.a * p.beta_c_eff), p.omega1, 0.0};
  std::vector<io::Record> recs;
  recs.reserve(3 * taus.size());
  for (const auto& [curve, mode] : curves) {
    for (const double tau : taus) {
      const OptimizationResult o = optimize_x(ep, mode, tau);
      const double nan = std::numeric_limits<double>::quiet_NaN();
      io::Record r;
      r.add("curve", std::string(curve));
      r.add("tau", tau);
      r.add("x_opt", o.operating ? o.x_opt : nan);
      r.add("efficiency", o.operating ? o.efficiency : nan);
      recs.push_back(std::move(r));
    }
  }
  const std::string preamble =
      "# preset = eff-vs-tau, a = " + fmt9(p.a) + ", n_particles = " +
      fmt9(p.n) + ", lambda = " + fmt9(p.lambda) + ", beta_c = " +
      fmt9(p.beta_c_eff) + ", omega1 = " + fmt9(p.omega1) + "\n";
  write_out(p, render(p, recs, preamble));
  return 0;
}

int cmd_figure(const Params& p) {
  if (p.preset.empty())
    throw std::invalid_argument(
        "figure requires --preset (q-vs-t, q-vs-tau, eff-vs-a, eff-vs-tau)");
  if (p.preset == "q-vs-t") return figure_q_vs_t(p);
  if (p.preset == "q-vs-tau") return figure_q_vs_tau(p);
  if (p.preset == "eff-vs-a") return figure_eff_vs_a(p);
  if (p.preset == "eff-vs-tau") return figure_eff_vs_tau(p);
  throw std::invalid_argument("unknown preset '" + p.preset +
                              "' (use q-vs-t, q-vs-tau, eff-vs-a, eff-vs-tau)");
}

// ---- option plumbing ----

struct Command {
  CLI::App* sub = nullptr;
  std::map<std::string, std::string> values;  // node-based: stable addresses
  std::vector<std::pair<std::string, CLI::Option*>> options;
  std::string config_path;
  std::function<int(const Params&)> run;
};

CLI::Option* add_opt(Command& c, const std::string& key, const std::string& flag,
                     const std::string& help) {
  CLI::Option* o = c.sub->add_option(flag, c.values[key], help);
  c.options.emplace_back(key, o);
  return o;
}

void add_x_opts(Command& c) {
  CLI::Option* px = add_opt(c, "x", "--x", "compression ratio omega1/omega2 in (0, 1); default 0.3");
  CLI::Option* pw = add_opt(c, "omega2", "--omega2", "compressed trap frequency (alternative to --x)");
  px->excludes(pw);
  pw->excludes(px);
  add_opt(c, "omega1", "--omega1", "initial trap frequency; default 1");
}

void add_bath_opts(Command& c) {
  add_opt(c, "n", "--n", "particle number; default 500");
  add_opt(c, "lambda", "--lambda", "interaction strength, >= 0; default 0");
  CLI::Option* pb = add_opt(c, "beta_c", "--beta-c", "cold inverse temperature; default 0.002");
  CLI::Option* ps = add_opt(c, "sigma_c", "--sigma-c",
                            "cold parameter n*beta_c*omega1 (alternative to --beta-c)");
  pb->excludes(ps);
  ps->excludes(pb);
  add_opt(c, "a", "--a", "bath temperature ratio beta_h/beta_c in (0, 1]; default 0.3");
}

void add_io_opts(Command& c) {
  add_opt(c, "format", "--format", "output format: csv or json; default csv");
  add_opt(c, "out", "--out", "write to this file instead of stdout");
  c.sub->add_option("--config", c.config_path,
                    "key = value parameter file; flags take precedence");
}

Params resolve(const Command& c) {
  Params p;
  io::KeyValues cfg;
  if (!c.config_path.empty()) {
    std::ifstream f(c.config_path);
    if (!f) throw std::invalid_argument("cannot read config file '" + c.config_path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    cfg = io::parse_key_values(ss.str());
    for (const auto& [k, v] : cfg)
      if (!allowed_keys().count(canon(k)))
        throw std::invalid_argument("config: unknown key '" + k + "'");
    const auto has = [&cfg](const char* key) {
      return std::any_of(cfg.begin(), cfg.end(),
                         [key](const auto& kv) { return canon(kv.first) == key; });
    };
    if (has("x") && has("omega2"))
      throw std::invalid_argument("config: 'x' and 'omega2' are mutually exclusive");
    if (has("beta_c") && has("sigma_c"))
      throw std::invalid_argument("config: 'beta_c' and 'sigma_c' are mutually exclusive");
  }
  std::set<std::string> flagged;
  for (const auto& [key, opt] : c.options)
    if (opt->count() > 0) flagged.insert(key);
  // A flag from an exclusive pair silences both config keys of that pair.
  const auto drop = [&](const char* k1, const char* k2) {
    if (flagged.count(k1) || flagged.count(k2))
      std::erase_if(cfg, [&](const auto& kv) {
        const std::string key = canon(kv.first);
        return key == k1 || key == k2;
      });
  };
  drop("x", "omega2");
  drop("beta_c", "sigma_c");
  for (const auto& [k, v] : cfg) apply(p, canon(k), v);
  for (const auto& [key, opt] : c.options)
    if (opt->count() > 0) apply(p, key, c.values.at(key));
  finalize(p);
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-time quantum Otto cycles on a trapped interacting gas"};
  app.require_subcommand(1);
  std::deque<Command> cmds;

  {
    Command& c = cmds.emplace_back();
    c.sub = app.add_subcommand("protocol",
                               "integrate one compression stroke and print its trace");
    add_x_opts(c);
    add_opt(c, "tau", "--tau", "stroke duration; default 1.5");
    add_opt(c, "protocol", "--protocol",
            "accidental, poly_omega, poly_b, sine_b, lcd, or constant; default accidental");
    add_io_opts(c);
    c.run = cmd_protocol;
  }
  {
    Command& c = cmds.emplace_back();
    c.sub = app.add_subcommand("cycle", "energetics of one four-stroke cycle");
    add_x_opts(c);
    add_opt(c, "tau", "--tau", "unitary stroke duration; default 1.5");
    add_opt(c, "protocol", "--protocol",
            "stroke family: accidental, poly_omega, poly_b, sine_b, lcd; default accidental");
    add_opt(c, "mode", "--mode",
            "numeric, closed_form, adiabatic, sudden, cd, lcd; default numeric");
    add_bath_opts(c);
    add_io_opts(c);
    c.run = cmd_cycle;
  }
  {
    Command& c = cmds.emplace_back();
    c.sub = app.add_subcommand("optimize",
                               "maximize output work over the compression ratio");
    add_x_opts(c);
    add_opt(c, "tau", "--tau", "unitary stroke duration; default 1.5");
    add_opt(c, "protocol", "--protocol",
            "stroke family for numeric mode; default accidental");
    add_opt(c, "mode", "--mode",
            "numeric, closed_form, adiabatic, sudden, cd, lcd; default numeric");
    add_bath_opts(c);
    add_io_opts(c);
    c.run = cmd_optimize;
  }
  {
    Command& c = cmds.emplace_back();
    c.sub = app.add_subcommand("sweep",
                               "maximum-power optimization along one parameter axis");
    add_x_opts(c);
    add_opt(c, "tau", "--tau", "unitary stroke duration; default 1.5");
    add_opt(c, "protocol", "--protocol", "stroke family for numeric mode; default accidental");
    add_opt(c, "mode", "--mode",
            "numeric, closed_form, adiabatic, sudden, cd, lcd; default numeric");
    add_opt(c, "axis", "--axis", "sweep axis: a, tau, lambda, or n; default tau");
    add_opt(c, "grid", "--grid", "axis grid start:stop:count");
    add_bath_opts(c);
    add_io_opts(c);
    c.run = cmd_sweep;
  }
  {
    Command& c = cmds.emplace_back();
    c.sub = app.add_subcommand(
        "sta-times", "stroke times where the accidental drive lands adiabatically");
    add_x_opts(c);
    add_opt(c, "n_max", "--n-max", "number of shortcut times to list; default 5");
    add_io_opts(c);
    c.run = cmd_sta_times;
  }
  {
    Command& c = cmds.emplace_back();
    c.sub = app.add_subcommand("figure", "canned data sets for the standard plots");
    add_opt(c, "preset", "--preset", "q-vs-t, q-vs-tau, eff-vs-a, or eff-vs-tau");
    add_x_opts(c);
    add_opt(c, "tau", "--tau", "stroke duration (q-vs-t default: first shortcut time)");
    add_opt(c, "grid", "--grid", "abscissa grid start:stop:count");
    add_bath_opts(c);
    add_io_opts(c);
    c.run = cmd_figure;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    for (const Command& c : cmds)
      if (c.sub->parsed()) return c.run(resolve(c));
    return 1;
  } catch (const InfeasibleProtocol& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const OdeError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}

#include "qotto/io.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qotto::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

KeyValues parse_key_values(std::istream& in) {
  KeyValues out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": empty key");
    out.emplace_back(key, value);
  }
  return out;
}

KeyValues parse_key_values(const std::string& text) {
  std::istringstream in(text);
  return parse_key_values(in);
}

std::string to_config(const KeyValues& kv) {
  std::string out;
  for (const auto& [k, v] : kv) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw std::invalid_argument("unknown output format '" + name + "' (use csv or json)");
}

void Record::add(const std::string& name, double v) {
  fields.push_back({name, fmt9(v), false});
}
void Record::add(const std::string& name, int v) {
  fields.push_back({name, std::to_string(v), false});
}
void Record::add(const std::string& name, const std::string& v) {
  fields.push_back({name, v, true});
}

std::string to_csv(const std::vector<Record>& records, const std::string& preamble) {
  std::string out = preamble;
  if (records.empty()) return out;
  for (std::size_t i = 0; i < records[0].fields.size(); ++i) {
    if (i) out += ',';
    out += records[0].fields[i].name;
  }
  out += '\n';
  for (const Record& r : records) {
    for (std::size_t i = 0; i < r.fields.size(); ++i) {
      if (i) out += ',';
      out += r.fields[i].value;
    }
    out += '\n';
  }
  return out;
}

namespace {

void append_json_value(std::string& out, const Record::Field& f) {
  if (f.quoted) {
    out += '"';
    out += f.value;  // field values never need escaping here
    out += '"';
  } else if (f.value == "nan" || f.value == "inf" || f.value == "-inf") {
    out += "null";  // JSON has no non-finite numbers
  } else {
    out += f.value;
  }
}

}  // namespace

std::string to_json(const Record& record) {
  std::string out = "{";
  for (std::size_t i = 0; i < record.fields.size(); ++i) {
    if (i) out += ", ";
    out += '"';
    out += record.fields[i].name;
    out += "\": ";
    append_json_value(out, record.fields[i]);
  }
  out += "}\n";
  return out;
}

std::string to_json(const std::vector<Record>& records) {
  std::string out = "[\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    std::string obj = to_json(records[i]);
    obj.pop_back();  // inner newline
    out += "  ";
    out += obj;
    if (i + 1 < records.size()) out += ',';
    out += '\n';
  }
  out += "]\n";
  return out;
}

Record to_record(const CycleResult& r) {
  Record rec;
  rec.add("e_a", r.e_a);
  rec.add("e_b", r.e_b);
  rec.add("e_c", r.e_c);
  rec.add("e_d", r.e_d);
  rec.add("w1", r.w1);
  rec.add("q2", r.q2);
  rec.add("w3", r.w3);
  rec.add("q4", r.q4);
  rec.add("w_total", r.w_total);
  rec.add("efficiency", r.efficiency);
  rec.add("power", r.power);
  rec.add("q_ab", r.q_ab);
  rec.add("q_cd", r.q_cd);
  rec.add("x", r.x);
  rec.add("a", r.a);
  rec.add("n_particles", r.n_particles);
  rec.add("lambda", r.lambda);
  rec.add("tau", r.tau);
  return rec;
}

Record to_record(const OptimizationResult& r) {
  Record rec;
  rec.add("x_opt", r.x_opt);
  rec.add("w_max", r.w_max);
  rec.add("power", r.power_max);
  rec.add("efficiency", r.efficiency);
  rec.add("q_ab", r.q_ab);
  rec.add("q_cd", r.q_cd);
  rec.add("regime", std::string(to_string(r.regime)));
  rec.add("operating", std::string(r.operating ? "true" : "false"));
  rec.add("iterations", r.iterations);
  return rec;
}

Record to_record(const SweepPoint& p) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  Record rec;
  rec.add("axis_value", p.axis_value);
  const bool on = p.opt.operating;
  rec.add("x_opt", on ? p.opt.x_opt : nan);
  rec.add("w_max", on ? p.opt.w_max : nan);
  rec.add("power", on ? p.opt.power_max : nan);
  rec.add("efficiency", on ? p.opt.efficiency : nan);
  rec.add("regime", std::string(to_string(p.opt.regime)));
  return rec;
}

std::string sweep_preamble(const SweepResult& s) {
  std::string out = "# axis = ";
  out += to_string(s.axis);
  out += ", mode = ";
  out += to_string(s.mode);
  out += "\n# fixed: n_particles = " + std::to_string(s.base.medium.n_particles);
  out += ", lambda = " + fmt9(s.base.medium.lambda);
  out += ", beta_c = " + fmt9(s.base.reservoirs.beta_c);
  out += ", a = " + fmt9(s.base.reservoirs.temperature_ratio());
  out += ", omega1 = " + fmt9(s.base.omega1);
  out += ", tau = " + fmt9(s.tau);
  out += '\n';
  return out;
}

std::vector<Record> sweep_records(const SweepResult& s) {
  std::vector<Record> out;
  out.reserve(s.points.size());
  for (const SweepPoint& p : s.points) out.push_back(to_record(p));
  return out;
}

std::string trajectory_csv(const ScalingTrajectory& traj, const TrapProtocol& protocol) {
  const bool lcd = protocol.kind() == ProtocolKind::lcd;
  std::string out = "t,omega,b,bdot,q,b_ad";
  if (lcd) out += ",omega_eff,q_lcd";
  out += '\n';
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double t = traj.times[i];
    // Reported omega is the reference frequency (the base schedule for lcd).
    out += fmt9(t);
    out += ',';
    out += fmt9(protocol.reference_omega(t));
    out += ',';
    out += fmt9(traj.b[i]);
    out += ',';
    out += fmt9(traj.bdot[i]);
    out += ',';
    out += fmt9(traj.q[i]);
    out += ',';
    out += fmt9(traj.b_ad[i]);
    if (lcd) {
      const double w2 = traj.omega_sq[i];
      out += ',';
      out += fmt9(w2 >= 0.0 ? std::sqrt(w2) : std::numeric_limits<double>::quiet_NaN());
      out += ',';
      out += fmt9(lcd_q_factor(*protocol.base(), t));
    }
    out += '\n';
  }
  return out;
}

}  // namespace qotto::io

#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qotto/cycle.hpp"
#include "qotto/ermakov.hpp"
#include "qotto/format.hpp"
#include "qotto/optimize.hpp"

// Data-only serialization.  All floats go through fmt9 (9 significant
// digits, locale-independent), fields keep a fixed order, and nothing
// time- or host-dependent is ever written, so identical configs produce
// byte-identical files.

namespace qotto::io {

// ---- flat key = value configs ('#' starts a comment) ----

using KeyValues = std::vector<std::pair<std::string, std::string>>;

KeyValues parse_key_values(std::istream& in);
KeyValues parse_key_values(const std::string& text);
std::string to_config(const KeyValues& kv);

// ---- flat records ----

enum class OutputFormat { csv, json };
OutputFormat parse_format(const std::string& name);

struct Record {
  struct Field {
    std::string name;
    std::string value;  // pre-formatted
    bool quoted;        // JSON: emit with quotes
  };
  std::vector<Field> fields;

  void add(const std::string& name, double v);  // NaN -> csv "nan", json null
  void add(const std::string& name, int v);
  void add(const std::string& name, const std::string& v);
};

// CSV: optional '#' preamble lines, then a header row and one row per record.
std::string to_csv(const std::vector<Record>& records, const std::string& preamble = "");
// JSON: single flat object, or array of flat objects.
std::string to_json(const Record& record);
std::string to_json(const std::vector<Record>& records);

Record to_record(const CycleResult& r);
Record to_record(const OptimizationResult& r);
// Sweep rows: axis_value, x_opt, w_max, power, efficiency, regime.
Record to_record(const SweepPoint& p);

// Fixed-parameter preamble ("# key = value" lines) for sweep files.
std::string sweep_preamble(const SweepResult& s);
std::vector<Record> sweep_records(const SweepResult& s);

// Trajectory export: columns t, omega, b, bdot, q, b_ad; protocols of kind
// lcd append omega_eff (the effective frequency, NaN where inverted) and
// q_lcd (the analytic counterdiabatic factor).
std::string trajectory_csv(const ScalingTrajectory& traj, const TrapProtocol& protocol);

}  // namespace qotto::io

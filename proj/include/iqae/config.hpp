// Copyright 2026 The IQAE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Run configuration files.
//
//   # comment
//   [section]
//   key = value
//
// A value is a number, a double-quoted string, true/false, or a bracketed
// (possibly nested) array of values, written on one line. Sections and keys
// are fixed; anything unknown is an error naming the field.

#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "iqae/eigensolver.hpp"
#include "iqae/error.hpp"
#include "iqae/models.hpp"

namespace iqae {

using json = nlohmann::ordered_json;

/// Parsed but not yet validated config: section -> key -> value.
using RawConfig = std::map<std::string, std::map<std::string, json>>;

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

// Drops a trailing comment, ignoring '#' inside double quotes.
inline std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

inline json parse_value(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    throw ConfigError(where + ": cannot parse value '" + text + "'");
  }
}

}  // namespace detail

inline RawConfig parse_config(std::istream& in) {
  RawConfig raw;
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = detail::trim(detail::strip_comment(line));
    if (text.empty()) continue;
    const std::string where = "config line " + std::to_string(line_no);
    if (text.front() == '[') {
      if (text.back() != ']') throw ConfigError(where + ": unterminated section header");
      section = detail::trim(std::string_view(text).substr(1, text.size() - 2));
      if (section.empty()) throw ConfigError(where + ": empty section name");
      if (raw.contains(section)) throw ConfigError(where + ": section [" + section + "] appears twice");
      raw[section];
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    if (section.empty()) throw ConfigError(where + ": key outside of any section");
    const std::string key = detail::trim(std::string_view(text).substr(0, eq));
    if (key.empty()) throw ConfigError(where + ": missing key");
    const std::string field = section + "." + key;
    if (raw[section].contains(key)) throw ConfigError(where + ": " + field + " is set twice");
    raw[section][key] = detail::parse_value(detail::trim(std::string_view(text).substr(eq + 1)), where + " (" + field + ")");
  }
  return raw;
}

inline RawConfig parse_config_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline RawConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  return parse_config(in);
}

/// Applies `section.key=value`; a value that is not valid JSON is taken as a
/// plain string.
inline void apply_override(RawConfig& raw, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    throw ConfigError("override '" + assignment + "' must look like section.key=value");
  }
  const std::string section = detail::trim(std::string_view(assignment).substr(0, dot));
  const std::string key = detail::trim(std::string_view(assignment).substr(dot + 1, eq - dot - 1));
  const std::string value = detail::trim(std::string_view(assignment).substr(eq + 1));
  json parsed = json::parse(value, nullptr, false);
  raw[section][key] = parsed.is_discarded() ? json(value) : std::move(parsed);
}

struct StateSpec {
  std::string kind = "plus";
  std::vector<std::array<double, 3>> bloch;
  std::vector<std::size_t> ones;
  std::size_t layers = 0;
  std::uint64_t seed = 0;
  std::size_t p = 1;
  std::vector<std::pair<double, double>> qaoa_angles;
  std::vector<double> angles;
  std::size_t statevector_limit = kDefaultStatevectorLimit;
};

struct BackendSpec {
  std::string kind = "exact";
  std::string inner = "exact";
  std::size_t shots = 8192;
  std::uint64_t seed = 0;
  bool grouping = false;
};

struct ModeSpec {
  std::string kind = "solve";
  std::string parameter;
  std::vector<double> values;
  std::optional<std::string> overlap_in;
  std::optional<std::string> overlap_out;
  std::vector<double> taus;
  std::vector<std::size_t> K_values;
  std::vector<std::size_t> N_list;
  std::size_t r = 8;
  std::uint64_t seed = 0;
  std::vector<std::size_t> M_list;
};

struct OutputSpec {
  std::string path;
  std::string format = "json";
  bool timing = false;
};

struct RunConfig {
  models::ModelSpec model;
  StateSpec state;
  SolverConfig solver;
  std::optional<std::vector<std::size_t>> select;
  BackendSpec backend;
  ModeSpec mode;
  OutputSpec output;
  RawConfig raw;
};

namespace detail {

class Section {
 public:
  Section(const RawConfig& raw, std::string name, std::set<std::string> allowed) : name_(std::move(name)) {
    auto it = raw.find(name_);
    if (it != raw.end()) values_ = &it->second;
    if (values_) {
      for (const auto& [k, v] : *values_) {
        if (!allowed.contains(k)) throw ConfigError("unknown key " + name_ + "." + k);
      }
    }
  }

  bool has(const std::string& key) const { return values_ && values_->contains(key); }
  std::string field(const std::string& key) const { return name_ + "." + key; }

  const json& at(const std::string& key) const {
    if (!has(key)) throw ConfigError(field(key) + " is required");
    return values_->at(key);
  }

  double number(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_number()) throw ConfigError(field(key) + " must be a number");
    return v.get<double>();
  }

  double number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

  std::uint64_t count(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      throw ConfigError(field(key) + " must be a nonnegative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::uint64_t count(const std::string& key, std::uint64_t fallback) const { return has(key) ? count(key) : fallback; }

  std::uint64_t positive(const std::string& key, std::uint64_t fallback) const {
    const std::uint64_t v = count(key, fallback);
    if (v == 0) throw ConfigError(field(key) + " must be positive");
    return v;
  }

  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_boolean()) throw ConfigError(field(key) + " must be true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      throw ConfigError(field(key) + " is required");
    }
    const json& v = at(key);
    if (!v.is_string()) throw ConfigError(field(key) + " must be a string");
    return v.get<std::string>();
  }

  std::string choice(const std::string& key, const std::set<std::string>& options,
                     std::optional<std::string> fallback = std::nullopt) const {
    std::string v = string(key, fallback);
    if (!options.contains(v)) {
      std::string list;
      for (const auto& o : options) list += (list.empty() ? "" : ", ") + o;
      throw ConfigError(field(key) + " must be one of {" + list + "}, got '" + v + "'");
    }
    return v;
  }

  std::vector<double> numbers(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_array()) throw ConfigError(field(key) + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError(field(key) + " must be an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::vector<std::size_t> counts(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_array()) throw ConfigError(field(key) + " must be an array of nonnegative integers");
    std::vector<std::size_t> out;
    for (const auto& e : v) {
      if (!e.is_number_integer() || e.get<long long>() < 0) {
        throw ConfigError(field(key) + " must be an array of nonnegative integers");
      }
      out.push_back(e.get<std::size_t>());
    }
    return out;
  }

  std::vector<std::vector<double>> rows(const std::string& key, std::size_t width) const {
    const json& v = at(key);
    std::vector<std::vector<double>> out;
    if (!v.is_array()) throw ConfigError(field(key) + " must be an array of arrays");
    for (const auto& row : v) {
      if (!row.is_array() || row.size() != width) {
        throw ConfigError(field(key) + " rows must have " + std::to_string(width) + " entries");
      }
      std::vector<double> r;
      for (const auto& e : row) {
        if (!e.is_number()) throw ConfigError(field(key) + " entries must be numbers");
        r.push_back(e.get<double>());
      }
      out.push_back(std::move(r));
    }
    return out;
  }

 private:
  std::string name_;
  const std::map<std::string, json>* values_ = nullptr;
};

}  // namespace detail

/// Checks every section and converts to typed settings. Throws ConfigError.
inline RunConfig validate_config(const RawConfig& raw) {
  static const std::set<std::string> kSections{"model", "state", "solver", "backend", "mode", "output"};
  for (const auto& [name, values] : raw) {
    if (!kSections.contains(name)) throw ConfigError("unknown section [" + name + "]");
  }
  RunConfig cfg;
  cfg.raw = raw;

  const detail::Section mode(raw, "mode",
                             {"kind", "parameter", "values", "overlap_in", "overlap_out", "taus", "K_values", "N_list",
                              "r", "seed", "M_list"});
  cfg.mode.kind = mode.choice("kind", {"solve", "sweep", "compare-ite", "moments", "bench"}, "solve");
  const bool bench = cfg.mode.kind == "bench";

  const detail::Section model(raw, "model",
                              {"name", "N", "J", "h", "delta", "r", "seed", "periodic", "beta1", "beta2", "beta3"});
  if (!bench || model.has("name")) {
    cfg.model.name = model.string("name");
    cfg.model.periodic = model.boolean("periodic", true);
    for (const char* key : {"N", "J", "h", "delta", "r", "seed", "beta1", "beta2", "beta3"}) {
      if (model.has(key)) cfg.model.parameters[key] = model.number(key);
    }
    models::build_model(cfg.model);
  }

  const detail::Section state(raw, "state",
                              {"kind", "bloch", "ones", "layers", "seed", "p", "angles", "statevector_limit"});
  cfg.state.kind =
      state.choice("kind", {"plus", "zero", "basis", "product", "qaoa", "hardware_efficient", "ry_cnot"}, "plus");
  cfg.state.statevector_limit = state.positive("statevector_limit", kDefaultStatevectorLimit);
  if (cfg.state.kind == "product") {
    for (const auto& r : state.rows("bloch", 3)) cfg.state.bloch.push_back({r[0], r[1], r[2]});
  }
  if (cfg.state.kind == "basis") cfg.state.ones = state.counts("ones");
  if (cfg.state.kind == "hardware_efficient") {
    cfg.state.layers = state.count("layers");
    cfg.state.seed = state.count("seed", 0);
  }
  if (cfg.state.kind == "qaoa") {
    if (state.has("angles")) {
      for (const auto& r : state.rows("angles", 2)) cfg.state.qaoa_angles.emplace_back(r[0], r[1]);
      cfg.state.p = cfg.state.qaoa_angles.size();
    } else {
      cfg.state.p = state.count("p", 1);
    }
  }
  if (cfg.state.kind == "ry_cnot") {
    cfg.state.angles = state.numbers("angles");
    if (cfg.state.angles.size() != 2 && cfg.state.angles.size() != 4) {
      throw ConfigError("state.angles must have 2 or 4 entries for ry_cnot");
    }
  }

  const detail::Section solver(raw, "solver", {"reg_threshold", "stop_threshold", "K_max", "cap", "select"});
  if (solver.has("reg_threshold")) {
    cfg.solver.reg_threshold = solver.number("reg_threshold");
    if (*cfg.solver.reg_threshold < 0) throw ConfigError("solver.reg_threshold must be nonnegative");
  }
  cfg.solver.stop_threshold = solver.number("stop_threshold", 1e-6);
  if (!(cfg.solver.stop_threshold > 0)) throw ConfigError("solver.stop_threshold must be positive");
  cfg.solver.K_max = solver.count("K_max", cfg.solver.K_max);
  if (solver.has("cap")) cfg.solver.cap = solver.positive("cap", 1);
  if (solver.has("select")) cfg.select = solver.counts("select");

  const detail::Section backend(raw, "backend", {"kind", "inner", "shots", "seed", "grouping"});
  cfg.backend.kind = backend.choice("kind", {"exact", "product", "sampled"}, "exact");
  cfg.backend.inner = backend.choice("inner", {"exact", "product"}, "exact");
  if (backend.has("shots")) {
    const json& v = backend.at("shots");
    if (!v.is_number_integer() || v.get<long long>() <= 0) throw ConfigError("backend.shots must be a positive integer");
  }
  cfg.backend.shots = backend.positive("shots", 8192);
  cfg.backend.seed = backend.count("seed", 0);
  cfg.backend.grouping = backend.boolean("grouping", false);

  if (cfg.mode.kind == "sweep") {
    cfg.mode.parameter = mode.string("parameter");
    cfg.mode.values = mode.numbers("values");
    if (cfg.mode.values.empty()) throw ConfigError("mode.values must not be empty");
    if (mode.has("overlap_in")) cfg.mode.overlap_in = mode.string("overlap_in");
    if (mode.has("overlap_out")) cfg.mode.overlap_out = mode.string("overlap_out");
  } else if (cfg.mode.kind == "compare-ite") {
    cfg.mode.taus = mode.numbers("taus");
    for (double t : cfg.mode.taus) {
      if (t < 0) throw ConfigError("mode.taus must be nonnegative");
    }
  } else if (cfg.mode.kind == "moments") {
    cfg.mode.K_values = mode.counts("K_values");
  } else if (bench) {
    cfg.mode.N_list = mode.counts("N_list");
    if (cfg.mode.N_list.empty()) throw ConfigError("mode.N_list must not be empty");
    for (std::size_t n : cfg.mode.N_list) {
      if (n == 0) throw ConfigError("mode.N_list entries must be positive");
    }
    cfg.mode.r = mode.positive("r", 8);
    if (cfg.mode.r > 20) throw ConfigError("mode.r must be at most 20");
    cfg.mode.seed = mode.count("seed", 0);
    if (mode.has("M_list")) cfg.mode.M_list = mode.counts("M_list");
  }

  const detail::Section output(raw, "output", {"path", "format", "timing"});
  cfg.output.path = output.string("path");
  cfg.output.format = output.choice("format", {"json", "csv"}, "json");
  cfg.output.timing = output.boolean("timing", false);
  return cfg;
}

inline json echo(const RawConfig& raw) {
  json out = json::object();
  for (const auto& [section, values] : raw) {
    json s = json::object();
    for (const auto& [k, v] : values) s[k] = v;
    out[section] = std::move(s);
  }
  return out;
}

}  // namespace iqae

// Copyright 2026 The qhomog Authors
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

#pragma once

// Experiment configuration: per-experiment key schemas, flat "key = value"
// files, flag overrides and typed, origin-tagged access to resolved values.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qhomog/errors.hpp"
#include "qhomog/io/csv.hpp"
#include "qhomog/io/parse.hpp"

#ifndef QHOMOG_VERSION
#define QHOMOG_VERSION "0.0.0"
#endif

namespace qhomog::cli {

inline constexpr std::string_view kVersion = QHOMOG_VERSION;

enum class Kind { Count, Seed, Real, Angle, AngleList, AnglePair, State, Choice, Bool, Labels, Text };

struct KeySpec {
  std::string name;
  Kind kind;
  std::string default_value;
  std::string help;
  std::vector<std::string> choices = {};
};

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"homogenize", "contractivity", "stability",
                                                 "figure2",    "circuit-verify", "qrc-narma"};
  return names;
}

namespace detail {

inline std::vector<KeySpec> dynamics_keys(std::string n_default, std::string mode_default) {
  return {
      {"n", Kind::Count, std::move(n_default), "number of reservoir qubits N"},
      {"schedule", Kind::Choice, "fixed", "coupling schedule", {"fixed", "uniform"}},
      {"theta", Kind::Angle, "pi/4", "fixed coupling angle (radians, pi/4 style literals accepted)"},
      {"theta-range", Kind::AnglePair, "pi/8,3pi/8", "lo,hi for the uniform schedule"},
      {"seed", Kind::Seed, "1", "root seed"},
      {"xi", Kind::State, "plus", "reservoir state"},
      {"mode", Kind::Choice, std::move(mode_default), "evolution mode", {"exact-joint", "mean-field"}},
      {"max-joint-qubits", Kind::Count, "12", "qubit cap for exact-joint mode"},
  };
}

}  // namespace detail

inline std::vector<KeySpec> schema(std::string_view experiment) {
  using detail::dynamics_keys;
  std::vector<KeySpec> keys;
  auto add = [&](std::vector<KeySpec> more) { keys.insert(keys.end(), more.begin(), more.end()); };
  const KeySpec fidelity{"fidelity", Kind::Choice, "uhlmann", "fidelity measure", {"uhlmann", "overlap"}};
  if (experiment == "homogenize") {
    add(dynamics_keys("5", "exact-joint"));
    add({{"rho0", Kind::State, "zero", "initial input state"},
         fidelity,
         {"steps", Kind::Count, "50", "length of the average-state series (0 disables)"}});
  } else if (experiment == "contractivity") {
    add(dynamics_keys("30", "mean-field"));
    add({{"rho0", Kind::State, "zero", "initial input state"},
         {"tol", Kind::Real, "1e-12", "allowed per-step increase of d_k"},
         {"sweep", Kind::Count, "0", "random trajectories to sweep (0 disables)"}});
  } else if (experiment == "stability") {
    add(dynamics_keys("30", "mean-field"));
    add({{"rho-a", Kind::State, "zero", "first initial state"},
         {"rho-b", Kind::State, "one", "second initial state"},
         {"epsilon", Kind::Real, "1e-3", "washout threshold on the pairwise distance"},
         {"tol", Kind::Real, "1e-12", "allowed per-step increase of the pairwise distance"}});
  } else if (experiment == "figure2") {
    keys = {{"n", Kind::Count, "5", "number of reservoir qubits N"},
            {"theta", Kind::AngleList, "pi/4,pi/6", "comma-separated fixed coupling angles, one curve each"},
            {"seed", Kind::Seed, "1", "root seed (recorded; the fixed schedule draws nothing)"},
            {"rho0", Kind::State, "zero", "initial input state"},
            {"xi", Kind::State, "plus", "reservoir state"},
            {"mode", Kind::Choice, "exact-joint", "evolution mode", {"exact-joint", "mean-field"}},
            {"max-joint-qubits", Kind::Count, "12", "qubit cap for exact-joint mode"},
            fidelity};
  } else if (experiment == "circuit-verify") {
    keys = {{"layout", Kind::Text, "search", "layout file to verify, or 'search' to run the exhaustive search"},
            {"variant", Kind::Choice, "auto", "RZ(-2eta) variant for the search", {"auto", "printed", "standard"}},
            {"n-min", Kind::Count, "1", "smallest n checked"},
            {"n-max", Kind::Count, "8", "largest n checked"},
            {"max-single", Kind::Count, "6", "single-qubit gate budget for the search"},
            {"probe-n", Kind::Count, "3", "n used to screen search candidates"},
            {"tol", Kind::Real, "1e-10", "phase-equivalence tolerance"},
            {"seed", Kind::Seed, "1", "root seed (recorded; the search is deterministic)"}};
  } else if (experiment == "qrc-narma") {
    keys = {{"order", Kind::Choice, "2", "NARMA order", {"2", "10"}},
            {"n", Kind::Count, "6", "number of reservoir qubits N"},
            {"seed", Kind::Seed, "3", "seed for the NARMA inputs (and shot sampling)"},
            {"length", Kind::Count, "2000", "series length"},
            {"lambda", Kind::Real, "1e-6", "ridge penalty"},
            {"washout", Kind::Count, "50", "initial steps discarded before training"},
            {"train-fraction", Kind::Real, "0.7", "chronological train share of the post-washout rows"},
            {"input-scale", Kind::Real, "2.0", "s_k = min(1, scale * u_k)"},
            {"theta0", Kind::Angle, "pi/4", "coupling theta_k = theta0 * (a + b * s_k)"},
            {"coupling-a", Kind::Real, "0.5", "a in theta_k"},
            {"coupling-b", Kind::Real, "1.0", "b in theta_k"},
            {"xi", Kind::State, "plus", "initial state of every reservoir qubit"},
            {"observables", Kind::Labels, "default", "Pauli labels like Z0,Z0Z1; 'default' = Z on each qubit + adjacent ZZ"},
            {"reuse-reservoir", Kind::Bool, "true", "keep the reservoir across inputs (false resets it each step)"},
            {"shots", Kind::Count, "0", "measurement shots per expectation (0 = exact)"}};
  } else {
    throw ConfigError("unknown experiment '" + std::string(experiment) + "'");
  }
  return keys;
}

struct Setting {
  std::string value;
  std::string origin;  // "default", "--theta", "file.cfg:3"
};

struct RawSetting {
  std::string key = {};
  std::string value = {};
  std::string origin = {};
};

class ExperimentConfig {
 public:
  std::string experiment;
  std::vector<std::string> order;
  std::map<std::string, Setting> values;

  bool has(const std::string& key) const { return values.count(key) != 0; }

  const Setting& at(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) throw ConfigError("experiment " + experiment + " has no key '" + key + "'");
    return it->second;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    const Setting& s = at(key);
    throw ConfigError(s.origin + ": " + key + ": " + msg);
  }

  const std::string& text(const std::string& key) const { return at(key).value; }

  template <typename Fn>
  auto parsed(const std::string& key, Fn fn) const -> decltype(fn(std::string_view{})) {
    try {
      return fn(text(key));
    } catch (const Error& e) {
      fail(key, e.what());
    }
  }

  std::size_t count(const std::string& key) const {
    return parsed(key, [](std::string_view s) { return static_cast<std::size_t>(io::parse_uint(s)); });
  }
  std::uint64_t seed(const std::string& key) const {
    return parsed(key, [](std::string_view s) { return io::parse_uint(s, "seed"); });
  }
  double real(const std::string& key) const {
    return parsed(key, [](std::string_view s) { return io::parse_real(io::trim(s)); });
  }
  double angle(const std::string& key) const { return parsed(key, [](std::string_view s) { return io::parse_angle(s); }); }
  std::vector<double> angles(const std::string& key) const {
    return parsed(key, [](std::string_view s) {
      std::vector<double> out;
      for (auto part : io::split(s, ',')) out.push_back(io::parse_angle(part));
      return out;
    });
  }
  std::pair<double, double> angle_pair(const std::string& key) const {
    const auto v = angles(key);
    if (v.size() != 2) fail(key, "expected two angles lo,hi");
    return {v[0], v[1]};
  }
  DensityMatrix state(const std::string& key) const {
    return parsed(key, [](std::string_view s) { return io::parse_state_spec(s); });
  }
  bool flag(const std::string& key) const { return parsed(key, [](std::string_view s) { return io::parse_bool(s); }); }
  std::vector<std::string> labels(const std::string& key) const {
    std::vector<std::string> out;
    if (text(key) == "default") return out;
    for (auto part : io::split(text(key), ',')) {
      const auto t = io::trim(part);
      if (t.empty()) fail(key, "empty label in list");
      out.emplace_back(t);
    }
    return out;
  }

  // Every key in schema order; a valid config file on its own.
  std::string canonical() const {
    std::string out = "experiment = " + experiment + "\n";
    for (const auto& k : order) out += k + " = " + at(k).value + "\n";
    return out;
  }

  std::string hash() const { return io::hex64(io::fnv1a64(canonical())); }
};

// "key = value" per line; '#' starts a comment line; blank lines ignored.
inline std::vector<RawSetting> parse_config_text(std::string_view text, const std::string& source) {
  std::vector<RawSetting> out;
  std::size_t line_no = 0;
  for (auto line : io::split(text, '\n')) {
    ++line_no;
    const auto t = io::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const std::string origin = source + ":" + std::to_string(line_no);
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) throw ConfigError(origin + ": expected 'key = value'");
    const auto key = io::trim(t.substr(0, eq));
    if (key.empty()) throw ConfigError(origin + ": missing key before '='");
    for (const auto& prev : out)
      if (prev.key == key) throw ConfigError(origin + ": key '" + std::string(key) + "' already set at " + prev.origin);
    out.push_back({std::string(key), std::string(io::trim(t.substr(eq + 1))), origin});
  }
  return out;
}

inline std::vector<RawSetting> load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

// Experiment named by an `experiment = ...` line, if any.
inline std::optional<RawSetting> experiment_line(const std::vector<RawSetting>& file) {
  for (const auto& s : file)
    if (s.key == "experiment") return s;
  return std::nullopt;
}

inline void validate_value(const ExperimentConfig& cfg, const KeySpec& spec) {
  switch (spec.kind) {
    case Kind::Count: cfg.count(spec.name); break;
    case Kind::Seed: cfg.seed(spec.name); break;
    case Kind::Real: cfg.real(spec.name); break;
    case Kind::Angle: cfg.angle(spec.name); break;
    case Kind::AngleList: cfg.angles(spec.name); break;
    case Kind::AnglePair: cfg.angle_pair(spec.name); break;
    case Kind::State: cfg.state(spec.name); break;
    case Kind::Bool: cfg.flag(spec.name); break;
    case Kind::Labels: cfg.labels(spec.name); break;
    case Kind::Text:
      if (cfg.text(spec.name).empty()) cfg.fail(spec.name, "value is empty");
      break;
    case Kind::Choice:
      if (std::find(spec.choices.begin(), spec.choices.end(), cfg.text(spec.name)) == spec.choices.end()) {
        std::string all;
        for (const auto& c : spec.choices) all += (all.empty() ? "" : ", ") + c;
        cfg.fail(spec.name, "'" + cfg.text(spec.name) + "' is not one of: " + all);
      }
      break;
  }
}

// Defaults, then the config file, then flags (flags win). Unknown keys and
// malformed values are rejected with the origin of the offending setting.
inline ExperimentConfig resolve_config(const std::string& experiment, const std::vector<RawSetting>& file,
                                       const std::vector<RawSetting>& flags = {}) {
  const auto keys = schema(experiment);
  ExperimentConfig cfg;
  cfg.experiment = experiment;
  for (const auto& k : keys) {
    cfg.order.push_back(k.name);
    cfg.values[k.name] = {k.default_value, "default"};
  }
  auto apply = [&](const RawSetting& s) {
    if (s.key == "experiment") {
      if (s.value != experiment)
        throw ConfigError(s.origin + ": config is for experiment '" + s.value + "', not '" + experiment + "'");
      return;
    }
    auto it = cfg.values.find(s.key);
    if (it == cfg.values.end()) throw ConfigError(s.origin + ": unknown key '" + s.key + "' for experiment " + experiment);
    it->second = {s.value, s.origin};
  };
  for (const auto& s : file) apply(s);
  for (const auto& s : flags) apply(s);
  for (const auto& k : keys) validate_value(cfg, k);
  return cfg;
}

}  // namespace qhomog::cli

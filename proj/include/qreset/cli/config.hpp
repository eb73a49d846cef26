// Copyright 2026 The qreset Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QRESET_CLI_CONFIG_HPP
#define QRESET_CLI_CONFIG_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qreset/distributions.hpp"
#include "qreset/qubit.hpp"
#include "qreset/spectral.hpp"

/// Scenario files: one `key = value` per line, dotted keys, `#` comments.
namespace qreset::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { DistProfile, Evolve, Equilibrium, Mot, Bloch, Jc };

inline std::optional<Command> parse_command(std::string_view s) {
  if (s == "dist-profile") return Command::DistProfile;
  if (s == "evolve") return Command::Evolve;
  if (s == "equilibrium") return Command::Equilibrium;
  if (s == "mot") return Command::Mot;
  if (s == "bloch") return Command::Bloch;
  if (s == "jc") return Command::Jc;
  return std::nullopt;
}

inline std::string_view to_string(Command c) {
  switch (c) {
    case Command::DistProfile: return "dist-profile";
    case Command::Evolve: return "evolve";
    case Command::Equilibrium: return "equilibrium";
    case Command::Mot: return "mot";
    case Command::Bloch: return "bloch";
    case Command::Jc: return "jc";
  }
  return "unknown";
}

inline const std::set<std::string, std::less<>>& known_keys() {
  static const std::set<std::string, std::less<>> keys = {
      "command",         "dist.kind",       "dist.alpha",        "dist.beta",        "system.energies",
      "system.omega",    "state.coeffs",    "state.phases",      "state.normalize",  "state.bloch",
      "jc.a",            "jc.b",            "jc.coupling",       "grid.t_max",       "grid.steps",
      "grid.stride",     "grid.tolerance",  "mc.trajectories",   "mc.seed",          "mot.tau",
      "mot.alpha_tau_min", "mot.alpha_tau_max", "mot.points",    "mot.scale",        "profile.alpha_t_max",
      "profile.points",  "equilibrium.mode", "sweep.alpha_min",  "sweep.alpha_max",  "sweep.points",
      "sweep.betas",     "output.path"};
  return keys;
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace detail

/// Parses the raw key/value pairs. Rejects malformed lines, duplicate keys
/// and keys outside the known set.
inline std::map<std::string, std::string, std::less<>> parse_key_values(std::string_view text) {
  std::map<std::string, std::string, std::less<>> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string trimmed = detail::trim(line);
    if (trimmed.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    std::string key = detail::trim(std::string_view(trimmed).substr(0, eq));
    std::string value = detail::trim(std::string_view(trimmed).substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (!known_keys().contains(key)) throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (!out.emplace(key, value).second) throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    if (end == text.size()) break;
  }
  return out;
}

/// Typed view of a scenario file.
struct ScenarioConfig {
  std::optional<Command> command;
  std::optional<ResetDistribution> dist;
  std::optional<DistributionKind> dist_kind;  // set even when alpha is absent (mot)
  std::optional<double> dist_beta;
  std::vector<double> energies;
  std::vector<Complex> coeffs;
  std::optional<BlochVector> bloch;
  std::optional<JaynesCummingsModel> jc;
  double t_max = 0.0;
  std::size_t steps = 0;
  std::size_t stride = 1;
  std::optional<double> normalization_tolerance;
  std::size_t trajectories = 0;
  std::uint64_t seed = 20260101;
  double mot_tau = 1.0;
  double mot_alpha_tau_min = 0.01;
  double mot_alpha_tau_max = 5.0;
  std::size_t mot_points = 50;
  bool mot_log_scale = true;
  double profile_alpha_t_max = 5.0;
  std::size_t profile_points = 501;
  std::string equilibrium_mode = "state";
  double sweep_alpha_min = 1e-2;
  double sweep_alpha_max = 1e2;
  std::size_t sweep_points = 81;
  std::vector<double> sweep_betas = {0.5, 1.0, 2.0};
  std::string output_path;
};

namespace detail {

class KeyReader {
 public:
  explicit KeyReader(const std::map<std::string, std::string, std::less<>>& kv) : kv_(kv) {}

  bool has(std::string_view key) const { return kv_.find(key) != kv_.end(); }

  std::string text(std::string_view key) const { return kv_.find(key)->second; }

  double number(std::string_view key) const { return parse_double(key, text(key)); }

  double positive(std::string_view key) const {
    const double v = number(key);
    if (!(v > 0.0)) throw ConfigError(std::string(key) + ": must be positive");
    return v;
  }

  std::size_t count(std::string_view key, std::size_t minimum = 1) const {
    const std::string s = text(key);
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw ConfigError(std::string(key) + ": expected a non-negative integer");
    if (v < minimum) throw ConfigError(std::string(key) + ": must be at least " + std::to_string(minimum));
    return static_cast<std::size_t>(v);
  }

  std::uint64_t u64(std::string_view key) const {
    const std::string s = text(key);
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw ConfigError(std::string(key) + ": expected an unsigned integer");
    return v;
  }

  bool boolean(std::string_view key) const {
    const std::string s = text(key);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError(std::string(key) + ": expected true or false");
  }

  std::vector<double> list(std::string_view key) const {
    std::vector<double> out;
    std::stringstream ss(text(key));
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
    if (out.empty()) throw ConfigError(std::string(key) + ": empty list");
    return out;
  }

  static double parse_double(std::string_view key, const std::string& s) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) {
      throw ConfigError(std::string(key) + ": '" + s + "' is not a finite number");
    }
    return v;
  }

 private:
  const std::map<std::string, std::string, std::less<>>& kv_;
};

}  // namespace detail

/// Converts raw pairs to a ScenarioConfig. Only checks the fields present;
/// per-command requirements are enforced by `require_*` at run time.
inline ScenarioConfig parse_scenario(const std::map<std::string, std::string, std::less<>>& kv) {
  const detail::KeyReader r(kv);
  ScenarioConfig c;
  try {
    if (r.has("command")) {
      c.command = parse_command(r.text("command"));
      if (!c.command) throw ConfigError("command: unknown command '" + r.text("command") + "'");
    }
    if (r.has("dist.kind")) {
      const std::string kind = r.text("dist.kind");
      if (kind == "exponential") {
        c.dist_kind = DistributionKind::Exponential;
      } else if (kind == "gamma") {
        c.dist_kind = DistributionKind::Gamma;
      } else if (kind == "levy-smirnoff" || kind == "levy") {
        c.dist_kind = DistributionKind::LevySmirnoff;
      } else {
        throw ConfigError("dist.kind: expected exponential, gamma or levy-smirnoff");
      }
      if (r.has("dist.beta")) {
        if (c.dist_kind != DistributionKind::Gamma) throw ConfigError("dist.beta: only valid for the gamma law");
        c.dist_beta = r.positive("dist.beta");
      } else if (c.dist_kind == DistributionKind::Gamma) {
        throw ConfigError("dist.beta: required for the gamma law");
      }
      if (r.has("dist.alpha")) {
        const double a = r.positive("dist.alpha");
        switch (*c.dist_kind) {
          case DistributionKind::Exponential: c.dist = ResetDistribution::exponential(a); break;
          case DistributionKind::Gamma: c.dist = ResetDistribution::gamma(a, *c.dist_beta); break;
          case DistributionKind::LevySmirnoff: c.dist = ResetDistribution::levy_smirnoff(a); break;
        }
      }
    } else if (r.has("dist.alpha") || r.has("dist.beta")) {
      throw ConfigError("dist.kind: required when dist.alpha or dist.beta is given");
    }

    if (r.has("system.energies") && r.has("system.omega")) {
      throw ConfigError("system: give either system.energies or system.omega, not both");
    }
    if (r.has("system.energies")) {
      c.energies = r.list("system.energies");
      (void)Spectrum(c.energies);  // validates ordering
    } else if (r.has("system.omega")) {
      const double w = r.positive("system.omega");
      c.energies = {-0.5 * w, 0.5 * w};
    }

    if (r.has("state.coeffs")) {
      const auto amps = r.list("state.coeffs");
      std::vector<double> phases(amps.size(), 0.0);
      if (r.has("state.phases")) {
        phases = r.list("state.phases");
        if (phases.size() != amps.size()) throw ConfigError("state.phases: length differs from state.coeffs");
      }
      for (std::size_t i = 0; i < amps.size(); ++i) c.coeffs.push_back(std::polar(1.0, phases[i]) * amps[i]);
      const bool normalize = r.has("state.normalize") && r.boolean("state.normalize");
      // validates normalization or zero vector
      (void)pure_state(c.coeffs, normalize ? Normalization::Normalize : Normalization::Require);
      if (normalize) {
        double n2 = 0.0;
        for (const auto& v : c.coeffs) n2 += std::norm(v);
        for (auto& v : c.coeffs) v /= std::sqrt(n2);
      }
    } else if (r.has("state.phases") || r.has("state.normalize")) {
      throw ConfigError("state.coeffs: required when state.phases or state.normalize is given");
    }
    if (r.has("state.bloch")) {
      const auto v = r.list("state.bloch");
      if (v.size() != 3) throw ConfigError("state.bloch: expected three components");
      c.bloch = BlochVector{v[0], v[1], v[2]};
      if (c.bloch->norm() > 1.0 + 1e-10) throw ConfigError("state.bloch: norm exceeds 1");
    }

    if (r.has("jc.a") || r.has("jc.b")) {
      if (!r.has("jc.a") || !r.has("jc.b")) throw ConfigError("jc: both jc.a and jc.b are required");
      const double coupling = r.has("jc.coupling") ? r.positive("jc.coupling") : 1.0;
      c.jc = JaynesCummingsModel(r.number("jc.a"), r.number("jc.b"), coupling);
    } else if (r.has("jc.coupling")) {
      throw ConfigError("jc: jc.coupling given without jc.a and jc.b");
    }

    if (r.has("grid.t_max")) c.t_max = r.positive("grid.t_max");
    if (r.has("grid.steps")) c.steps = r.count("grid.steps", 2);
    if (r.has("grid.stride")) c.stride = r.count("grid.stride", 1);
    if (r.has("grid.tolerance")) c.normalization_tolerance = r.positive("grid.tolerance");
    if (r.has("mc.trajectories")) c.trajectories = r.count("mc.trajectories", 0);
    if (r.has("mc.seed")) c.seed = r.u64("mc.seed");
    if (r.has("mot.tau")) c.mot_tau = r.positive("mot.tau");
    if (r.has("mot.alpha_tau_min")) c.mot_alpha_tau_min = r.positive("mot.alpha_tau_min");
    if (r.has("mot.alpha_tau_max")) c.mot_alpha_tau_max = r.positive("mot.alpha_tau_max");
    if (r.has("mot.points")) c.mot_points = r.count("mot.points", 1);
    if (r.has("mot.scale")) {
      const std::string s = r.text("mot.scale");
      if (s != "log" && s != "linear") throw ConfigError("mot.scale: expected log or linear");
      c.mot_log_scale = s == "log";
    }
    if (c.mot_alpha_tau_max < c.mot_alpha_tau_min) throw ConfigError("mot: alpha_tau_max below alpha_tau_min");
    if (r.has("profile.alpha_t_max")) c.profile_alpha_t_max = r.positive("profile.alpha_t_max");
    if (r.has("profile.points")) c.profile_points = r.count("profile.points", 2);
    if (r.has("equilibrium.mode")) {
      c.equilibrium_mode = r.text("equilibrium.mode");
      if (c.equilibrium_mode != "state" && c.equilibrium_mode != "coherence-factor") {
        throw ConfigError("equilibrium.mode: expected state or coherence-factor");
      }
    }
    if (r.has("sweep.alpha_min")) c.sweep_alpha_min = r.positive("sweep.alpha_min");
    if (r.has("sweep.alpha_max")) c.sweep_alpha_max = r.positive("sweep.alpha_max");
    if (r.has("sweep.points")) c.sweep_points = r.count("sweep.points", 2);
    if (r.has("sweep.betas")) {
      c.sweep_betas = r.list("sweep.betas");
      for (double b : c.sweep_betas) {
        if (!(b > 0.0)) throw ConfigError("sweep.betas: shapes must be positive");
      }
    }
    if (c.sweep_alpha_max < c.sweep_alpha_min) throw ConfigError("sweep: alpha_max below alpha_min");
    if (r.has("output.path")) c.output_path = r.text("output.path");
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return c;
}

inline ScenarioConfig parse_scenario_text(std::string_view text) { return parse_scenario(parse_key_values(text)); }

inline ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str());
}

}  // namespace qreset::cli

#endif  // QRESET_CLI_CONFIG_HPP

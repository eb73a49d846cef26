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

#ifndef QRESET_CLI_COMMANDS_HPP
#define QRESET_CLI_COMMANDS_HPP

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qreset/cli/config.hpp"
#include "qreset/qreset.hpp"

namespace qreset::cli {

using Json = nlohmann::ordered_json;

/// 17 significant digits: enough to round-trip any double.
inline std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : columns_(header.size()) {
    append_row(header);
  }

  void add(const std::vector<double>& values) {
    if (values.size() != columns_) throw std::logic_error("CsvTable: row width mismatch");
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format17(v));
    append_row(cells);
  }

  const std::string& text() const noexcept { return text_; }
  std::size_t rows() const noexcept { return rows_; }

 private:
  void append_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text_ += ',';
      text_ += cells[i];
    }
    text_ += '\n';
    ++rows_;
  }

  std::size_t columns_;
  std::string text_;
  std::size_t rows_ = 0;
};

struct RunOptions {
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
};

struct RunResult {
  std::string csv;
  Json summary;
};

namespace detail {

inline const ResetDistribution& require_dist(const ScenarioConfig& c) {
  if (!c.dist) throw ConfigError("dist.kind and dist.alpha are required for this command");
  return *c.dist;
}

inline Spectrum require_spectrum(const ScenarioConfig& c) {
  if (c.energies.empty()) throw ConfigError("system.energies or system.omega is required for this command");
  return Spectrum(c.energies);
}

struct Grid {
  double h;
  std::size_t K;
};

inline Grid require_grid(const ScenarioConfig& c) {
  if (c.t_max <= 0.0 || c.steps < 2) throw ConfigError("grid.t_max and grid.steps are required for this command");
  return {c.t_max / static_cast<double>(c.steps), c.steps};
}

inline ResetKernelTable make_kernel(const ScenarioConfig& c, const ResetDistribution& dist) {
  const Grid g = require_grid(c);
  return build_kernel(dist, g.h, g.K, c.normalization_tolerance);
}

inline std::vector<std::size_t> output_indices(std::size_t K, std::size_t stride) {
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k <= K; k += stride) idx.push_back(k);
  if (idx.back() != K) idx.push_back(K);
  return idx;
}

inline Json dist_json(const ResetDistribution& d) {
  Json j;
  j["kind"] = std::string(to_string(d.kind()));
  j["alpha"] = d.alpha();
  if (d.beta()) j["beta"] = *d.beta();
  return j;
}

inline Json bloch_json(const BlochVector& r) { return Json::array({r.x, r.y, r.z}); }

// Hermiticity and trace of every emitted state, positivity at the hard floor.
struct StateChecks {
  double max_hermiticity_error = 0.0;
  double max_trace_error = 0.0;
  double min_eigenvalue = std::numeric_limits<double>::infinity();
  std::size_t eigenvalue_warnings = 0;

  void check(const ComplexMatrix& m, double t) {
    const auto d = diagnose_state(m);
    max_hermiticity_error = std::max(max_hermiticity_error, d.hermiticity_error);
    max_trace_error = std::max(max_trace_error, d.trace_error);
    min_eigenvalue = std::min(min_eigenvalue, d.min_eigenvalue);
    if (d.hermiticity_error > DensityMatrix::kHermiticityTolerance) {
      throw InvariantError("hermiticity", "state at t = " + format17(t) + " deviates by " + format17(d.hermiticity_error));
    }
    if (d.trace_error > 1e-10) {
      throw InvariantError("trace", "state at t = " + format17(t) + " has trace error " + format17(d.trace_error));
    }
    if (d.min_eigenvalue < kPositivityHardFloor) {
      throw InvariantError("positivity", "state at t = " + format17(t) + " has eigenvalue " + format17(d.min_eigenvalue));
    }
    if (d.min_eigenvalue < DensityMatrix::kEigenvalueFloor) ++eigenvalue_warnings;
  }

  Json json() const {
    return Json{{"max_hermiticity_error", max_hermiticity_error},
                {"max_trace_error", max_trace_error},
                {"min_eigenvalue", min_eigenvalue},
                {"eigenvalue_warnings", eigenvalue_warnings},
                {"passed", true}};
  }
};

inline std::vector<std::string> element_columns(Eigen::Index d, const std::string& prefix) {
  std::vector<std::string> cols;
  for (Eigen::Index n = 0; n < d; ++n) {
    for (Eigen::Index m = n; m < d; ++m) {
      const std::string tag = prefix + "rho_" + std::to_string(n) + "_" + std::to_string(m);
      cols.push_back(tag + "_re");
      cols.push_back(tag + "_im");
    }
  }
  return cols;
}

template <class Get>
void append_elements(std::vector<double>& row, Eigen::Index d, Get&& get) {
  for (Eigen::Index n = 0; n < d; ++n) {
    for (Eigen::Index m = n; m < d; ++m) {
      const auto [re, im] = get(n, m);
      row.push_back(re);
      row.push_back(im);
    }
  }
}

inline std::vector<double> log_or_linear_grid(double lo, double hi, std::size_t n, bool log_scale) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(n - 1);
    out[i] = log_scale ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo))) : lo + f * (hi - lo);
  }
  return out;
}

}  // namespace detail

/// Table of T1/α and T0 against αt for all three laws
/// (gamma shape from dist.beta, default 3/2).
inline RunResult run_dist_profile(const ScenarioConfig& c) {
  const double beta = c.dist_beta.value_or(1.5);
  const std::vector<ResetDistribution> laws = {ResetDistribution::exponential(1.0), ResetDistribution::gamma(1.0, beta),
                                               ResetDistribution::levy_smirnoff(1.0)};
  CsvTable csv({"alpha_t", "t1_exponential", "t1_gamma", "t1_levy_smirnoff", "t0_exponential", "t0_gamma",
                "t0_levy_smirnoff"});
  std::vector<double> best_x(3, 0.0), best_v(3, -1.0);
  for (std::size_t i = 0; i < c.profile_points; ++i) {
    const double x = c.profile_alpha_t_max * static_cast<double>(i) / static_cast<double>(c.profile_points - 1);
    std::vector<double> row{x};
    for (std::size_t l = 0; l < laws.size(); ++l) {
      const double v = density_t1(laws[l], x);
      row.push_back(v);
      if (std::isfinite(v) && v > best_v[l]) {
        best_v[l] = v;
        best_x[l] = x;
      }
    }
    for (const auto& law : laws) row.push_back(survival_t0(law, x));
    csv.add(row);
  }
  Json s;
  s["command"] = "dist-profile";
  s["gamma_beta"] = beta;
  s["rows"] = csv.rows() - 1;
  s["argmax_alpha_t"] = Json{{"exponential", best_x[0]}, {"gamma", best_x[1]}, {"levy-smirnoff", best_x[2]}};
  return {csv.text(), s};
}

/// Reset state of a d-level system under unitary dynamics on a time grid,
/// with observables and optional Monte-Carlo columns.
inline RunResult run_evolve(const ScenarioConfig& c, const RunOptions& opt) {
  const auto& dist = detail::require_dist(c);
  const Spectrum spec = detail::require_spectrum(c);
  if (c.coeffs.empty()) throw ConfigError("state.coeffs is required for evolve");
  if (static_cast<Eigen::Index>(c.coeffs.size()) != spec.dim()) {
    throw ConfigError("state.coeffs: length does not match the number of energies");
  }
  const DensityMatrix rho0 = pure_state(c.coeffs);
  const auto kernel = detail::make_kernel(c, dist);
  const auto series = reset_state_series(rho0, spec, kernel);
  const auto idx = detail::output_indices(kernel.steps(), c.stride);
  const Eigen::Index d = spec.dim();

  std::optional<EnsembleEstimate> mc;
  const std::uint64_t seed = opt.seed.value_or(c.seed);
  if (c.trajectories > 0) {
    std::vector<double> times;
    for (auto k : idx) times.push_back(kernel.time(k));
    mc = estimate_reset_state([&](double s) { return unitary_evolve(rho0, spec, s); }, dist, times, c.trajectories, seed,
                              opt.threads);
  }

  auto header = std::vector<std::string>{"t"};
  for (auto& col : detail::element_columns(d, "")) header.push_back(col);
  for (const char* col : {"coherence_l1", "purity", "linear_entropy", "fidelity_unitary", "fidelity_initial", "delta_p",
                          "delta_f"}) {
    header.emplace_back(col);
  }
  if (mc) {
    for (auto& col : detail::element_columns(d, "mc_")) header.push_back(col);
    for (auto& col : detail::element_columns(d, "mc_se_")) header.push_back(col);
  }
  CsvTable csv(header);
  detail::StateChecks checks;
  double max_z = 0.0;
  double max_coherence_excess = -std::numeric_limits<double>::infinity();
  const double c0 = coherence_l1(rho0);
  for (std::size_t row_i = 0; row_i < idx.size(); ++row_i) {
    const std::size_t k = idx[row_i];
    const double t = kernel.time(k);
    const auto& rho = series[k];
    checks.check(rho.matrix(), t);
    const auto rec = make_observable_record(t, rho0, unitary_evolve(rho0, spec, t), rho);
    max_coherence_excess = std::max(max_coherence_excess, rec.coherence_l1 - c0);
    std::vector<double> row{t};
    detail::append_elements(row, d, [&](auto n, auto m) { return std::pair{rho(n, m).real(), rho(n, m).imag()}; });
    for (double v : {rec.coherence_l1, rec.purity, rec.linear_entropy, rec.fidelity_vs_unitary, rec.fidelity_vs_initial,
                     rec.delta_p, rec.delta_f}) {
      row.push_back(v);
    }
    if (mc) {
      const auto& m = mc->mean_state[row_i];
      checks.check(m.matrix(), t);
      const auto& se_re = mc->std_error_real[row_i];
      const auto& se_im = mc->std_error_imag[row_i];
      detail::append_elements(row, d, [&](auto n, auto mm) { return std::pair{m(n, mm).real(), m(n, mm).imag()}; });
      detail::append_elements(row, d, [&](auto n, auto mm) { return std::pair{se_re(n, mm), se_im(n, mm)}; });
      for (Eigen::Index n = 0; n < d; ++n) {
        for (Eigen::Index mm = n; mm < d; ++mm) {
          const double dre = std::abs(m(n, mm).real() - rho(n, mm).real());
          const double dim = std::abs(m(n, mm).imag() - rho(n, mm).imag());
          if (se_re(n, mm) > 1e-12) max_z = std::max(max_z, dre / se_re(n, mm));
          if (se_im(n, mm) > 1e-12) max_z = std::max(max_z, dim / se_im(n, mm));
        }
      }
    }
    csv.add(row);
  }
  Json s;
  s["command"] = "evolve";
  s["distribution"] = detail::dist_json(dist);
  s["dimension"] = d;
  s["grid"] = Json{{"h", kernel.step()}, {"steps", kernel.steps()}, {"t_max", kernel.time(kernel.steps())}};
  s["invariants"] = Json{{"state", checks.json()},
                         {"renewal_normalization_max_residual", kernel.max_normalization_residual()},
                         {"coherence_max_excess", max_coherence_excess}};
  const auto& last = series.back();
  s["final"] = Json{{"coherence_l1", coherence_l1(last)}, {"purity", purity(last)}};
  if (dist.kind() != DistributionKind::LevySmirnoff) {
    const auto eq = equilibrium_state(rho0, spec, dist);
    s["final"]["max_abs_diff_to_equilibrium"] = (last.matrix() - eq.matrix()).cwiseAbs().maxCoeff();
  }
  if (mc) s["monte_carlo"] = Json{{"trajectories", c.trajectories}, {"seed", seed}, {"max_z_score", max_z}};
  return {csv.text(), s};
}

/// Equilibrium state elements, or the coherence factor table.
inline RunResult run_equilibrium(const ScenarioConfig& c) {
  Json s;
  s["command"] = "equilibrium";
  s["mode"] = c.equilibrium_mode;
  if (c.equilibrium_mode == "coherence-factor") {
    std::vector<std::string> header{"alpha_nm"};
    for (double b : c.sweep_betas) header.push_back("c_beta_" + format17(b));
    CsvTable csv(header);
    const auto grid = detail::log_or_linear_grid(c.sweep_alpha_min, c.sweep_alpha_max, c.sweep_points, true);
    for (double a : grid) {
      std::vector<double> row{a};
      for (double b : c.sweep_betas) row.push_back(coherence_factor(a, b));
      csv.add(row);
    }
    s["betas"] = c.sweep_betas;
    s["rows"] = csv.rows() - 1;
    return {csv.text(), s};
  }
  const auto& dist = detail::require_dist(c);
  const Spectrum spec = detail::require_spectrum(c);
  if (c.coeffs.empty()) throw ConfigError("state.coeffs is required for equilibrium");
  if (static_cast<Eigen::Index>(c.coeffs.size()) != spec.dim()) {
    throw ConfigError("state.coeffs: length does not match the number of energies");
  }
  const DensityMatrix rho0 = pure_state(c.coeffs);
  const auto eq = equilibrium_state(rho0, spec, dist);
  const EquilibriumSpec eqs(dist);
  detail::StateChecks checks;
  checks.check(eq.matrix(), std::numeric_limits<double>::infinity());
  CsvTable csv({"n", "m", "rho0_re", "rho0_im", "multiplier_re", "multiplier_im", "rho_eq_re", "rho_eq_im"});
  for (Eigen::Index n = 0; n < spec.dim(); ++n) {
    for (Eigen::Index m = n; m < spec.dim(); ++m) {
      const Complex f = n == m ? Complex(1.0) : eqs.multiplier(spec.frequency(n, m));
      csv.add({static_cast<double>(n), static_cast<double>(m), rho0(n, m).real(), rho0(n, m).imag(), f.real(), f.imag(),
               eq(n, m).real(), eq(n, m).imag()});
    }
  }
  const auto vb = equilibrium_variance_bound(rho0, spec, dist);
  s["distribution"] = detail::dist_json(dist);
  s["L"] = eqs.L();
  s["purity"] = equilibrium_purity(rho0, spec, dist);
  s["purity_from_state"] = purity(eq);
  s["coherence_l1"] = equilibrium_coherence(rho0, spec, dist);
  s["invariants"] = Json{{"state", checks.json()},
                         {"variance_bound", Json{{"coherent_part", vb.coherent_part}, {"bound", vb.bound}, {"passed", vb.holds}}}};
  if (!vb.holds) throw InvariantError("variance bound", "equilibrium coherent purity exceeds the population variance sum");
  return {csv.text(), s};
}

/// Mean orthogonality time against ατ: closed form and optional Monte Carlo.
inline RunResult run_mot(const ScenarioConfig& c, const RunOptions& opt) {
  if (!c.dist_kind) throw ConfigError("dist.kind is required for mot");
  const double tau = c.mot_tau;
  const auto grid = detail::log_or_linear_grid(c.mot_alpha_tau_min, c.mot_alpha_tau_max, c.mot_points, c.mot_log_scale);
  const std::uint64_t seed = opt.seed.value_or(c.seed);
  std::vector<std::string> header{"alpha_tau", "mot_over_tau"};
  if (c.trajectories > 0) {
    for (const char* col : {"mc_over_tau", "mc_se_over_tau", "relative_error"}) header.emplace_back(col);
  }
  CsvTable csv(header);
  double max_rel = 0.0;
  for (double at : grid) {
    const double alpha = at / tau;
    ResetDistribution dist = ResetDistribution::exponential(alpha);
    if (*c.dist_kind == DistributionKind::Gamma) dist = ResetDistribution::gamma(alpha, *c.dist_beta);
    if (*c.dist_kind == DistributionKind::LevySmirnoff) dist = ResetDistribution::levy_smirnoff(alpha);
    const double exact = mot_analytic(tau, dist);
    std::vector<double> row{at, exact / tau};
    if (c.trajectories > 0) {
      const auto r = mean_orthogonality_time_mc(tau, dist, c.trajectories, seed, opt.threads);
      const double rel = std::abs(r.mean - exact) / exact;
      max_rel = std::max(max_rel, rel);
      row.insert(row.end(), {r.mean / tau, r.std_error / tau, rel});
    }
    csv.add(row);
  }
  Json s;
  s["command"] = "mot";
  s["kind"] = std::string(to_string(*c.dist_kind));
  if (c.dist_beta) s["beta"] = *c.dist_beta;
  s["tau"] = tau;
  s["rows"] = grid.size();
  if (c.trajectories > 0) s["monte_carlo"] = Json{{"trajectories", c.trajectories}, {"seed", seed}, {"max_relative_error", max_rel}};
  return {csv.text(), s};
}

namespace detail {

inline Json bloch_checks(const std::vector<BlochVector>& free, const std::vector<BlochVector>& reset,
                         std::span<const double> times) {
  double max_excess = -std::numeric_limits<double>::infinity();
  double running_max = 0.0;
  StateChecks checks;
  for (std::size_t k = 0; k < reset.size(); ++k) {
    running_max = std::max(running_max, free[k].norm());
    const double n = reset[k].norm();
    if (n > 1.0 + 1e-10) throw InvariantError("bloch norm", "|r_sr| = " + format17(n) + " at t = " + format17(times[k]));
    max_excess = std::max(max_excess, n - running_max);
    ComplexMatrix m(2, 2);
    m(0, 0) = 0.5 * (1.0 - reset[k].z);
    m(1, 1) = 0.5 * (1.0 + reset[k].z);
    m(1, 0) = Complex(0.5 * reset[k].x, -0.5 * reset[k].y);
    m(0, 1) = std::conj(m(1, 0));
    checks.check(m, times[k]);
  }
  return Json{{"state", checks.json()}, {"norm_max_excess_over_running_max", max_excess}};
}

// Largest change of each component over the last quarter of the run.
inline std::array<double, 3> last_quarter_variation(const std::vector<BlochVector>& r) {
  const std::size_t start = r.size() - r.size() / 4 - 1;
  std::array<double, 3> lo{r[start].x, r[start].y, r[start].z};
  std::array<double, 3> hi = lo;
  for (std::size_t k = start; k < r.size(); ++k) {
    const std::array<double, 3> v{r[k].x, r[k].y, r[k].z};
    for (int i = 0; i < 3; ++i) {
      lo[i] = std::min(lo[i], v[i]);
      hi[i] = std::max(hi[i], v[i]);
    }
  }
  return {hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]};
}

}  // namespace detail

/// Qubit precession under H = (ω/2)σ_z with resetting, in Bloch form.
inline RunResult run_bloch(const ScenarioConfig& c) {
  const auto& dist = detail::require_dist(c);
  const Spectrum spec = detail::require_spectrum(c);
  if (spec.dim() != 2) throw ConfigError("bloch: the system must be a qubit");
  const double omega = spec.frequency(1, 0);
  BlochVector r0;
  if (c.bloch) {
    r0 = *c.bloch;
  } else if (c.coeffs.size() == 2) {
    r0 = bloch_from_density(pure_state(c.coeffs));
  } else {
    throw ConfigError("bloch: state.bloch or a two-component state.coeffs is required");
  }
  const auto kernel = detail::make_kernel(c, dist);
  const std::size_t n = kernel.steps() + 1;
  std::vector<double> times(n);
  std::vector<BlochVector> free(n);
  for (std::size_t k = 0; k < n; ++k) {
    times[k] = kernel.time(k);
    free[k] = bloch_unitary(r0, omega, times[k]);
  }
  const auto reset = bloch_reset_trajectory(free, kernel);
  Json inv = detail::bloch_checks(free, reset, times);
  CsvTable csv({"t", "x", "y", "z", "x_sr", "y_sr", "z_sr", "norm_sr"});
  for (auto k : detail::output_indices(kernel.steps(), c.stride)) {
    csv.add({times[k], free[k].x, free[k].y, free[k].z, reset[k].x, reset[k].y, reset[k].z, reset[k].norm()});
  }
  Json s;
  s["command"] = "bloch";
  s["distribution"] = detail::dist_json(dist);
  s["omega"] = omega;
  s["r0"] = detail::bloch_json(r0);
  s["final_reset"] = detail::bloch_json(reset.back());
  const auto eq = equilibrium_bloch(r0, omega, dist);
  s["equilibrium"] = detail::bloch_json(eq);
  s["final_distance_to_equilibrium"] =
      std::sqrt(std::pow(reset.back().x - eq.x, 2) + std::pow(reset.back().y - eq.y, 2) + std::pow(reset.back().z - eq.z, 2));
  inv["renewal_normalization_max_residual"] = kernel.max_normalization_residual();
  s["invariants"] = inv;
  return {csv.text(), s};
}

/// Jaynes-Cummings atom under resetting, as an x-z trajectory.
inline RunResult run_jc(const ScenarioConfig& c) {
  const auto& dist = detail::require_dist(c);
  if (!c.jc) throw ConfigError("jc.a and jc.b are required for jc");
  const auto kernel = detail::make_kernel(c, dist);
  const auto sim = jc_reset_simulation(*c.jc, kernel);
  Json inv = detail::bloch_checks(sim.free, sim.reset, sim.times);
  double max_y = 0.0;
  for (const auto& r : sim.reset) max_y = std::max(max_y, std::abs(r.y));
  inv["max_abs_y"] = max_y;
  CsvTable csv({"t", "x", "z", "norm", "x_sr", "z_sr", "norm_sr"});
  for (auto k : detail::output_indices(kernel.steps(), c.stride)) {
    const auto& f = sim.free[k];
    const auto& r = sim.reset[k];
    csv.add({sim.times[k], f.x, f.z, f.norm(), r.x, r.z, r.norm()});
  }
  const auto var = detail::last_quarter_variation(sim.reset);
  Json s;
  s["command"] = "jc";
  s["distribution"] = detail::dist_json(dist);
  s["model"] = Json{{"a", c.jc->a()}, {"b", c.jc->b()}, {"coupling", c.jc->coupling()}};
  s["r0"] = detail::bloch_json(sim.free.front());
  s["final_reset"] = detail::bloch_json(sim.reset.back());
  s["final_reset_norm"] = sim.reset.back().norm();
  s["last_quarter_variation"] = Json::array({var[0], var[1], var[2]});
  inv["renewal_normalization_max_residual"] = kernel.max_normalization_residual();
  s["invariants"] = inv;
  return {csv.text(), s};
}

/// Runs one scenario. Throws ConfigError for missing or inconsistent
/// settings and InvariantError / RunawayError for numerical failures.
inline RunResult run_scenario(Command cmd, const ScenarioConfig& c, const RunOptions& opt = {}) {
  if (c.command && *c.command != cmd) {
    throw ConfigError("config is for command '" + std::string(to_string(*c.command)) + "', not '" +
                      std::string(to_string(cmd)) + "'");
  }
  try {
    switch (cmd) {
      case Command::DistProfile: return run_dist_profile(c);
      case Command::Evolve: return run_evolve(c, opt);
      case Command::Equilibrium: return run_equilibrium(c);
      case Command::Mot: return run_mot(c, opt);
      case Command::Bloch: return run_bloch(c);
      case Command::Jc: return run_jc(c);
    }
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  } catch (const DimensionError& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown command");
}

}  // namespace qreset::cli

#endif  // QRESET_CLI_COMMANDS_HPP

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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion,
// followed by indented detail lines, and exits non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "qreset/qreset.hpp"
#include "test_support.hpp"

namespace {

using qreset::BlochVector;
using qreset::Complex;
using qreset::DensityMatrix;
using qreset::ResetDistribution;
using qreset::Spectrum;

constexpr std::uint64_t kSeed = 20260101;
constexpr double kPi = std::numbers::pi;

int g_failures = 0;

void report(int id, const std::string& name, bool pass) {
  std::printf("[%s] %d %s\n", pass ? "PASS" : "FAIL", id, name.c_str());
  if (!pass) ++g_failures;
}

template <class... Args>
void detail(const char* fmt, Args... args) {
  std::printf("    ");
  std::printf(fmt, args...);
  std::printf("\n");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

DensityMatrix plus_state() {
  return qreset::pure_state({Complex(std::numbers::sqrt2 / 2.0, 0.0), Complex(std::numbers::sqrt2 / 2.0, 0.0)});
}

// 1. Monte-Carlo mean orthogonality time against the closed form.
void mean_orthogonality_time() {
  const auto t0 = std::chrono::steady_clock::now();
  const double tau = 1.0;
  const std::size_t n = 500000;
  double worst = 0.0;
  for (const char* kind : {"exponential", "gamma(3/2)", "levy-smirnoff"}) {
    for (double at : {0.25, 1.0, 4.0}) {
      const double alpha = at / tau;
      const std::string k = kind;
      const ResetDistribution d = k == "exponential" ? ResetDistribution::exponential(alpha)
                                  : k == "gamma(3/2)" ? ResetDistribution::gamma(alpha, 1.5)
                                                      : ResetDistribution::levy_smirnoff(alpha);
      const double exact = qreset::mot_analytic(tau, d);
      const auto mc = qreset::mean_orthogonality_time_mc(tau, d, n, kSeed);
      const double rel = std::abs(mc.mean - exact) / exact;
      worst = std::max(worst, rel);
      detail("%-14s alpha*tau=%-5g exact=%.6f mc=%.6f (se %.1e) rel=%.2e", kind, at, exact / tau, mc.mean / tau,
             mc.std_error / tau, rel);
    }
  }
  const double elapsed = seconds_since(t0);
  detail("worst relative error %.2e (limit 1e-2), runtime %.1f s (limit 60 s)", worst, elapsed);
  report(1, "mean orthogonality time: Monte Carlo vs closed form", worst < 1e-2 && elapsed < 60.0);
}

// 2. Quadrature, Monte Carlo and the exponential closed form on a qubit.
void oracle_triangle() {
  const double omega = 1.0;
  const double alpha = 1.0;
  const auto spec = qreset::qubit_spectrum(omega);
  const auto rho0 = plus_state();
  const double h = 1e-3;
  const std::size_t K = 10000;
  bool pass = true;

  const auto kexp = qreset::build_kernel(ResetDistribution::exponential(alpha), h, K);
  const auto series = qreset::reset_state_series(rho0, spec, kexp);
  double closed_err = 0.0;
  for (std::size_t k = 0; k <= K; ++k) {
    const double t = kexp.time(k);
    const double w = spec.frequency(1, 0);
    const Complex c10 = rho0(1, 0) * std::polar(1.0, -w * t) * qreset::inm_exponential_closed_form(alpha, w, t);
    closed_err = std::max({closed_err, std::abs(series[k](1, 0) - c10), std::abs(series[k](0, 0) - rho0(0, 0)),
                           std::abs(series[k](1, 1) - rho0(1, 1))});
  }
  detail("exponential: quadrature vs closed form, max elementwise error %.2e over t <= 10 (limit 1e-6)", closed_err);
  pass = pass && closed_err < 1e-6;

  std::vector<double> times;
  std::vector<std::size_t> idx;
  for (int i = 1; i <= 20; ++i) {
    idx.push_back(static_cast<std::size_t>(i) * K / 20);
    times.push_back(kexp.time(idx.back()));
  }
  for (const auto& d : {ResetDistribution::exponential(alpha), ResetDistribution::gamma(alpha, 1.5),
                        ResetDistribution::levy_smirnoff(alpha)}) {
    const auto kernel = qreset::build_kernel(d, h, K);
    const auto mc = qreset::estimate_reset_state([&](double s) { return qreset::unitary_evolve(rho0, spec, s); }, d,
                                                 times, 100000, kSeed);
    double worst_z = 0.0;
    bool ok = true;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const auto q = qreset::reset_state(rho0, spec, kernel, idx[i]);
      const auto& m = mc.mean_state[i];
      for (Eigen::Index a = 0; a < 2; ++a) {
        for (Eigen::Index b = 0; b < 2; ++b) {
          const double parts[2][2] = {{m(a, b).real() - q(a, b).real(), mc.std_error_real[i](a, b)},
                                      {m(a, b).imag() - q(a, b).imag(), mc.std_error_imag[i](a, b)}};
          for (const auto& p : parts) {
            if (p[1] > 0.0) {
              worst_z = std::max(worst_z, std::abs(p[0]) / p[1]);
            } else if (std::abs(p[0]) > 1e-12) {
              ok = false;
            }
          }
        }
      }
    }
    detail("%-14s Monte Carlo vs quadrature at 20 times: max |z| = %.2f (limit 4)", std::string(qreset::to_string(d.kind())).c_str(),
           worst_z);
    pass = pass && ok && worst_z < 4.0;
  }
  report(2, "qubit oracle triangle: quadrature, Monte Carlo, closed form", pass);
}

// 3. Long-time reset states against the equilibrium state.
void equilibrium_convergence() {
  bool pass = true;
  std::mt19937_64 rng(kSeed);
  struct Case {
    std::vector<double> energies;
    double alpha;
  };
  for (const Case& c : {Case{{-0.5, 0.5}, 1.0}, Case{{0.0, 0.7, 1.9}, 1.2}, Case{{-1.0, 1.0}, 0.5}}) {
    const Spectrum spec(c.energies);
    double min_w = std::numeric_limits<double>::infinity();
    for (Eigen::Index n = 0; n < spec.dim(); ++n) {
      for (Eigen::Index m = n + 1; m < spec.dim(); ++m) min_w = std::min(min_w, std::abs(spec.frequency(n, m)));
    }
    for (double beta : {1.0, 1.5}) {
      const auto d = ResetDistribution::gamma(c.alpha, beta);
      const double t = 50.0 / std::min(c.alpha, min_w);
      const double h = 0.01;
      const auto K = static_cast<std::size_t>(std::ceil(t / h));
      const auto kernel = qreset::build_kernel(d, h, K);
      const auto rho0 = qreset::testing::random_pure_state(rng, spec.dim());
      const double err = qreset::testing::max_abs_diff(qreset::reset_state(rho0, spec, kernel, K).matrix(),
                                                       qreset::equilibrium_state(rho0, spec, d).matrix());
      detail("gamma beta=%.1f alpha=%.1f d=%d t=%.1f: max elementwise difference %.2e (limit 2e-3)", beta, c.alpha,
             static_cast<int>(spec.dim()), kernel.time(K), err);
      pass = pass && err < 2e-3;
    }
  }

  // Lévy-Smirnoff: coherence of an equal superposition out to αt = 10³.
  const double alpha = 1.0;
  const auto spec = qreset::qubit_spectrum(1.0);
  const std::size_t K = 10000;
  const auto kernel = qreset::build_kernel(ResetDistribution::levy_smirnoff(alpha), 0.1, K);
  const auto rho0 = plus_state();
  std::vector<double> mag(K + 1);
  for (std::size_t k = 0; k <= K; ++k) mag[k] = std::abs(qreset::inm(kernel, 1.0, k).value * rho0(1, 0));
  // Averages over ten consecutive windows must decrease.
  const std::size_t w = K / 10;
  double prev = std::numeric_limits<double>::infinity();
  bool decreasing = true;
  std::string means;
  for (std::size_t i = 0; i < 10; ++i) {
    double s = 0.0;
    for (std::size_t k = i * w + 1; k <= (i + 1) * w; ++k) s += mag[k];
    s /= static_cast<double>(w);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%.4f", i ? ", " : "", s);
    means += buf;
    decreasing = decreasing && s < prev;
    prev = s;
  }
  detail("levy-smirnoff window means of |rho_01|: %s", means.c_str());
  detail("levy-smirnoff |rho_01| at alpha*t = 1e3: %.4f (limit 5e-2), normalization residual %.1e", mag[K],
         kernel.max_normalization_residual());
  pass = pass && decreasing && mag[K] < 5e-2;
  report(3, "convergence to the equilibrium state", pass);
}

// 4. Coherence factor at the ends of the α_nm range.
void coherence_factor_endpoints() {
  const double lo = qreset::coherence_factor(0.01, 1.0);
  const double hi = qreset::coherence_factor(100.0, 1.0);
  detail("|C(0.01, 1)| = %.6f (limit < 0.05), |C(100, 1)| = %.6f (limit > 0.95)", lo, hi);
  report(4, "coherence factor regime endpoints", lo < 0.05 && hi > 0.95);
}

// 5. Randomized invariant suite.
void invariant_suite() {
  std::mt19937_64 rng(kSeed);
  std::uniform_int_distribution<int> dim(2, 4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int failures[6] = {0, 0, 0, 0, 0, 0};
  const char* names[6] = {"trace", "|I_nm| <= 1", "coherence monotonicity", "purity chain", "Cauchy-Schwarz",
                          "qubit closed forms"};
  const int cases = 1000;
  for (int c = 0; c < cases; ++c) {
    const Eigen::Index d = dim(rng);
    const auto spec = qreset::testing::random_spectrum(rng, d);
    const bool pure = unit(rng) < 0.5;
    const auto rho0 = pure ? qreset::testing::random_pure_state(rng, d) : qreset::testing::random_state(rng, d);
    const auto dist = qreset::testing::random_distribution(rng);
    const auto kernel = qreset::build_kernel(dist, 0.01, 200);
    const auto k = static_cast<std::size_t>(unit(rng) * 200.0);
    const auto rho = qreset::reset_state(rho0, spec, kernel, k);

    if (std::abs(rho.matrix().trace() - Complex(1.0)) > 1e-10) ++failures[0];
    const auto factors = qreset::inm_matrix(kernel, spec, k);
    if (factors.cwiseAbs().maxCoeff() > 1.0 + 1e-12) ++failures[1];
    if (qreset::coherence_l1(rho) > qreset::coherence_l1(rho0) + 1e-12) ++failures[2];
    const double dp = qreset::purity_loss(rho0, rho);
    const double sl = qreset::linear_entropy(rho);
    if (!(dp >= -1e-12 && dp <= sl + 1e-12 && sl <= qreset::population_linear_entropy(rho0) + 1e-12)) ++failures[3];
    const auto st = qreset::small_time_kernels(kernel, k);
    if (2.0 * st.R - st.I * st.I < -1e-15) ++failures[4];

    const auto spec2 = qreset::qubit_spectrum(spec.frequency(1, 0));
    const auto psi = qreset::testing::random_pure_state(rng, 2);
    const Complex i = qreset::inm(kernel, spec2.frequency(1, 0), k).value;
    const double p = psi(0, 0).real();
    const double dp_gen = qreset::purity_loss(psi, qreset::reset_state(psi, spec2, kernel, k));
    const double df_gen = qreset::fidelity_deviation(psi, qreset::inm_matrix(kernel, spec2, k));
    if (std::abs(qreset::qubit_purity_loss(p, i) - dp_gen) > 1e-10 ||
        std::abs(qreset::qubit_fidelity_deviation(p, i) - df_gen) > 1e-10) {
      ++failures[5];
    }
  }
  int total = 0;
  for (int j = 0; j < 6; ++j) {
    detail("%-24s %d failures in %d cases", names[j], failures[j], cases);
    total += failures[j];
  }
  report(5, "randomized invariant suite", total == 0);
}

// 6. Quantum Zeno regime.
void zeno() {
  const double omega = 1.0;
  const auto spec = qreset::qubit_spectrum(omega);
  const auto kernel = qreset::build_kernel(ResetDistribution::exponential(100.0 * omega), 1e-3, 10000);
  double worst = 1.0;
  std::mt19937_64 rng(kSeed);
  std::vector<DensityMatrix> states{plus_state()};
  for (int j = 0; j < 4; ++j) states.push_back(qreset::testing::random_pure_state(rng, 2));
  for (const auto& rho0 : states) {
    const auto series = qreset::reset_state_series(rho0, spec, kernel);
    for (const auto& rho : series) worst = std::min(worst, qreset::fidelity(rho, rho0));
  }
  detail("minimum fidelity to the initial state over t in [0, 10/omega]: %.6f (limit 0.95)", worst);
  report(6, "Zeno regime keeps fidelity to the initial state", worst >= 0.95);
}

// 7. Jaynes-Cummings atom under resetting.
void jaynes_cummings() {
  const qreset::JaynesCummingsModel model(std::sqrt(0.6), std::sqrt(0.4), 1.0);
  bool pass = true;
  std::vector<double> steady;
  for (double alpha : {0.01, 0.1}) {
    const auto kernel = qreset::build_kernel(ResetDistribution::exponential(alpha), 0.01, 20000);
    const auto sim = qreset::jc_reset_simulation(model, kernel);
    const double r0 = sim.free.front().norm();
    const std::size_t start = 15000;
    bool below = true;
    double lo[3] = {1e300, 1e300, 1e300};
    double hi[3] = {-1e300, -1e300, -1e300};
    for (std::size_t k = start; k < sim.reset.size(); ++k) {
      const auto& r = sim.reset[k];
      below = below && r.norm() < r0;
      const double v[3] = {r.x, r.y, r.z};
      for (int c = 0; c < 3; ++c) {
        lo[c] = std::min(lo[c], v[c]);
        hi[c] = std::max(hi[c], v[c]);
      }
    }
    const double var = std::max({hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]});
    const auto& last = sim.reset.back();
    steady.push_back(last.norm());
    detail("alpha=%.2f: |r_sr| < |r(0)| on [150, 200]: %s; last-quarter variation %.2e (limit 1e-2); r_sr(200) = "
           "(%.5f, %.5f, %.5f), norm %.5f",
           alpha, below ? "yes" : "no", var, last.x, last.y, last.z, last.norm());
    pass = pass && below && var < 1e-2;
  }
  const double gap = std::abs(steady[0] - steady[1]);
  detail("steady-vector norm difference %.4f (limit > 0.05)", gap);
  pass = pass && gap > 0.05;
  report(7, "Jaynes-Cummings atom settles to distinct steady vectors", pass);
}

// 8. Lévy-Smirnoff reset-event density at large and small αt.
void levy_density() {
  const double alpha = 1.0;
  const auto d = ResetDistribution::levy_smirnoff(alpha);
  const auto asymptote = [&](double t) { return 0.5 * alpha * std::sqrt(1.0 / (kPi * t)); };
  const double t_large = 1e3 / alpha;
  const double ratio = qreset::reset_density_t(d, t_large) / asymptote(t_large);
  const double corrected = qreset::reset_density_t(d, t_large) / std::sqrt(alpha / (2.0 * kPi * t_large));
  const double t_small = 1e-3 / alpha;
  const double small_ratio = qreset::reset_density_t(d, t_small) / asymptote(t_small);
  const bool large_ok = std::abs(ratio - 1.0) < 0.05;
  const bool small_ok = small_ratio < 1e-6;
  detail("alpha*t = 1e3: T / ((alpha/2) sqrt(1/(pi t))) = %.5f (limit within 5%% of 1): %s", ratio,
         large_ok ? "ok" : "not met");
  detail("alpha*t = 1e3: T / sqrt(alpha/(2 pi t)) = %.5f (for information)", corrected);
  detail("alpha*t = 1e-3: ratio to the same asymptote %.3e (limit 1e-6): %s", small_ratio, small_ok ? "ok" : "not met");
  report(8, "Levy-Smirnoff reset-event density asymptotics", large_ok && small_ok);
}

}  // namespace

int main() {
  std::printf("qreset acceptance (seed %llu)\n", static_cast<unsigned long long>(kSeed));
  const auto t0 = std::chrono::steady_clock::now();
  mean_orthogonality_time();
  oracle_triangle();
  equilibrium_convergence();
  coherence_factor_endpoints();
  invariant_suite();
  zeno();
  jaynes_cummings();
  levy_density();
  std::printf("%d of 8 criteria failed (%.1f s)\n", g_failures, seconds_since(t0));
  return g_failures == 0 ? 0 : 1;
}

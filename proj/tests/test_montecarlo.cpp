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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "qreset/montecarlo.hpp"
#include "qreset/observables.hpp"
#include "qreset/qubit.hpp"
#include "qreset/renewal.hpp"
#include "test_support.hpp"

using Catch::Matchers::WithinAbs;
using qreset::Complex;
using qreset::DensityMatrix;
using qreset::ResetDistribution;
using qreset::Spectrum;
using qreset::StreamRng;

namespace {

// Always yields 0: uniform_open01 then sits at its smallest value and
// exponential draws are -log(2^-54)/α ≈ 37.4/α.
struct ZeroRng {
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return 0; }
};

DensityMatrix plus_state() { return qreset::pure_state({Complex(std::sqrt(0.5), 0.0), Complex(std::sqrt(0.5), 0.0)}); }

}  // namespace

TEST_CASE("last reset epoch") {
  SECTION("no draw inside the window leaves the free trajectory") {
    ZeroRng rng;
    const auto last = qreset::sample_last_reset(ResetDistribution::exponential(1.0), 10.0, rng);
    CHECK(last.count == 0);
    CHECK(last.epoch == 0.0);
    const Spectrum spec({-0.5, 0.5});
    const auto rho0 = plus_state();
    const auto rho = qreset::sample_trajectory_state(
        [&](double s) { return qreset::unitary_evolve(rho0, spec, s); }, ResetDistribution::exponential(1.0), 10.0, rng);
    CHECK(qreset::testing::max_abs_diff(rho.matrix(), qreset::unitary_evolve(rho0, spec, 10.0).matrix()) == 0.0);
  }
  SECTION("exponential resets form a Poisson process") {
    const double alpha = 1.7;
    const double t = 3.0;
    const std::size_t n = 100000;
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      StreamRng rng(5, j);
      const auto last = qreset::sample_last_reset(ResetDistribution::exponential(alpha), t, rng);
      CHECK(last.epoch <= t);
      sum += static_cast<double>(last.count);
    }
    const double mean = sum / static_cast<double>(n);
    const double sigma = std::sqrt(alpha * t / static_cast<double>(n));
    CHECK(std::abs(mean - alpha * t) < 3.0 * sigma);
  }
}

TEST_CASE("ensemble estimate basics") {
  const Spectrum spec({-0.5, 0.5});
  const std::vector<double> grid = {0.0, 0.5, 1.0, 2.0, 4.0};
  SECTION("a single trajectory gives valid states and undefined errors") {
    const auto rho0 = plus_state();
    const auto est = qreset::estimate_reset_state([&](double s) { return qreset::unitary_evolve(rho0, spec, s); },
                                                  ResetDistribution::gamma(1.0, 1.5), grid, 1, 42);
    REQUIRE(est.mean_state.size() == grid.size());
    CHECK(est.n_trajectories == 1);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK_NOTHROW(DensityMatrix(est.mean_state[i].matrix()));
      CHECK(std::isnan(est.std_error_real[i](0, 1)));
    }
  }
  SECTION("a constant diagonal trajectory is returned exactly with zero spread") {
    qreset::ComplexMatrix m = qreset::ComplexMatrix::Zero(2, 2);
    m(0, 0) = 0.25;
    m(1, 1) = 0.75;
    const DensityMatrix rho0(m);
    const auto est = qreset::estimate_reset_state([&](double) { return rho0; }, ResetDistribution::exponential(2.0), grid,
                                                  10000, 3);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(est.mean_state[i].matrix() == rho0.matrix());
      CHECK(est.std_error_real[i].maxCoeff() == 0.0);
      CHECK(est.std_error_imag[i].maxCoeff() == 0.0);
    }
  }
  SECTION("trace and Hermiticity of the ensemble mean") {
    std::mt19937_64 rng(1);
    const auto rho0 = qreset::testing::random_state(rng, 2);
    const auto est = qreset::estimate_reset_state([&](double s) { return qreset::unitary_evolve(rho0, spec, s); },
                                                  ResetDistribution::levy_smirnoff(1.0), grid, 2000, 8);
    for (const auto& rho : est.mean_state) {
      const auto diag = qreset::diagnose_state(rho.matrix());
      CHECK(diag.hermiticity_error == 0.0);
      CHECK(diag.trace_error < 1e-14);
    }
  }
  SECTION("preconditions") {
    const auto rho0 = plus_state();
    auto traj = [&](double) { return rho0; };
    const std::vector<double> bad = {1.0, 0.5};
    CHECK_THROWS_AS(qreset::estimate_reset_state(traj, ResetDistribution::exponential(1.0), grid, 0, 1), qreset::DomainError);
    CHECK_THROWS_AS(qreset::estimate_reset_state(traj, ResetDistribution::exponential(1.0), bad, 10, 1), qreset::DomainError);
  }
}

TEST_CASE("Monte-Carlo ensemble agrees with the renewal quadrature") {
  const Spectrum spec = qreset::qubit_spectrum(1.0);
  const auto rho0 = plus_state();
  const double h = 1e-3;
  const std::size_t K = 5000;
  std::vector<double> grid;
  std::vector<std::size_t> index;
  for (std::size_t i = 250; i <= K; i += 250) {
    index.push_back(i);
    grid.push_back(h * static_cast<double>(i));
  }
  for (const auto& d : {ResetDistribution::exponential(1.0), ResetDistribution::gamma(1.0, 1.5),
                        ResetDistribution::levy_smirnoff(1.0)}) {
    const auto kernel = qreset::build_kernel(d, h, K);
    const auto est = qreset::estimate_reset_state([&](double s) { return qreset::unitary_evolve(rho0, spec, s); }, d,
                                                  grid, 100000, 20260101);
    double worst = 0.0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const auto ref = qreset::reset_state(rho0, spec, kernel, index[g]);
      for (Eigen::Index a = 0; a < 2; ++a) {
        for (Eigen::Index b = 0; b < 2; ++b) {
          const Complex diff = est.mean_state[g](a, b) - ref(a, b);
          const double se_re = est.std_error_real[g](a, b);
          const double se_im = est.std_error_imag[g](a, b);
          if (se_re > 1e-12) worst = std::max(worst, std::abs(diff.real()) / se_re);
          else CHECK(std::abs(diff.real()) < 1e-12);
          if (se_im > 1e-12) worst = std::max(worst, std::abs(diff.imag()) / se_im);
          else CHECK(std::abs(diff.imag()) < 1e-12);
        }
      }
    }
    INFO(qreset::to_string(d.kind()) << " worst z = " << worst);
    CHECK(worst < 4.0);
  }
}

TEST_CASE("Zeno regime keeps the ensemble close to the initial state") {
  const double omega = 1.0;
  const Spectrum spec = qreset::qubit_spectrum(omega);
  const auto rho0 = plus_state();
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(0.25 * i);
  const auto est = qreset::estimate_reset_state([&](double s) { return qreset::unitary_evolve(rho0, spec, s); },
                                                ResetDistribution::exponential(100.0 * omega), grid, 20000, 77);
  for (const auto& rho : est.mean_state) CHECK(qreset::fidelity(rho0, rho) > 0.95);
}

TEST_CASE("ensemble estimates are reproducible and thread-independent") {
  const Spectrum spec({-1.0, 0.2, 0.9});
  std::mt19937_64 rng(3);
  const auto rho0 = qreset::testing::random_state(rng, 3);
  const std::vector<double> grid = {0.3, 1.1, 2.9};
  auto run = [&](unsigned threads, std::uint64_t seed) {
    return qreset::estimate_reset_state([&](double s) { return qreset::unitary_evolve(rho0, spec, s); },
                                        ResetDistribution::gamma(0.8, 0.5), grid, 5003, seed, threads);
  };
  const auto a = run(1, 9);
  const auto b = run(4, 9);
  const auto c = run(3, 10);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(a.mean_state[i].matrix() == b.mean_state[i].matrix());
    CHECK(a.std_error_real[i] == b.std_error_real[i]);
    CHECK(a.std_error_imag[i] == b.std_error_imag[i]);
    CHECK(a.mean_state[i].matrix() != c.mean_state[i].matrix());
  }
}

TEST_CASE("orthogonality time under restart") {
  SECTION("no interruption gives exactly tau") {
    ZeroRng rng;
    CHECK(qreset::sample_orthogonality_time(2.0, ResetDistribution::exponential(1.0), rng) == 2.0);
    const auto r = qreset::mean_orthogonality_time_mc(1.0, ResetDistribution::exponential(1e-14), 1000, 1);
    CHECK(r.mean == 1.0);
    CHECK(r.std_error == 0.0);
    CHECK(r.n_samples == 1000);
  }
  SECTION("exponential restart at alpha tau = 1") {
    const double alpha = 2.0;
    const double tau = 0.5;
    const auto r = qreset::mean_orthogonality_time_mc(tau, ResetDistribution::exponential(alpha), 500000, 20260101);
    const double exact = std::expm1(1.0) / alpha;
    CHECK(std::abs(r.mean - exact) < 3.0 * r.std_error);
    CHECK(r.mean >= tau);
  }
  SECTION("Lévy-Smirnoff restart at alpha tau = 100") {
    const double tau = std::numbers::pi;
    const auto d = ResetDistribution::levy_smirnoff(100.0 / tau);
    const auto r = qreset::mean_orthogonality_time_mc(tau, d, 500000, 20260101);
    CHECK_THAT(qreset::mot_analytic(tau, d) / tau, WithinAbs(1.8811, 1e-4));
    CHECK(std::abs(r.mean - qreset::mot_analytic(tau, d)) < 3.0 * r.std_error);
  }
  SECTION("gamma restart within one percent of the closed form") {
    for (double x : {0.25, 1.0, 4.0}) {
      const auto d = ResetDistribution::gamma(x, 1.5);
      const auto r = qreset::mean_orthogonality_time_mc(1.0, d, 200000, 11);
      INFO("alpha tau = " << x);
      CHECK(std::abs(r.mean / qreset::mot_analytic(1.0, d) - 1.0) < 0.01);
    }
  }
  SECTION("runaway guard") {
    CHECK_THROWS_AS(qreset::mean_orthogonality_time_mc(10.0, ResetDistribution::exponential(100.0), 10, 1, 1, 1000),
                    qreset::RunawayError);
  }
  SECTION("a single run has an undefined standard error") {
    const auto r = qreset::mean_orthogonality_time_mc(1.0, ResetDistribution::gamma(1.0, 2.0), 1, 4);
    CHECK(std::isnan(r.std_error));
    CHECK(r.mean >= 1.0);
  }
  SECTION("reproducible across thread counts") {
    const auto d = ResetDistribution::levy_smirnoff(2.0);
    const auto a = qreset::mean_orthogonality_time_mc(1.0, d, 30011, 5, 1);
    const auto b = qreset::mean_orthogonality_time_mc(1.0, d, 30011, 5, 4);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
  }
  SECTION("preconditions") {
    CHECK_THROWS_AS(qreset::mean_orthogonality_time_mc(0.0, ResetDistribution::exponential(1.0), 10, 1), qreset::DomainError);
    CHECK_THROWS_AS(qreset::mean_orthogonality_time_mc(1.0, ResetDistribution::exponential(1.0), 0, 1), qreset::DomainError);
  }
}

TEST_CASE("batch partition covers every index once") {
  for (std::size_t n : {1, 7, 20, 21, 1000, 100003}) {
    const std::size_t batches = std::min<std::size_t>(qreset::kBatchCount, n);
    std::size_t expect = 0;
    for (std::size_t b = 0; b < batches; ++b) {
      const auto r = qreset::batch_range(n, batches, b);
      CHECK(r.begin == expect);
      CHECK(r.end > r.begin);
      expect = r.end;
    }
    CHECK(expect == n);
  }
}

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

#ifndef QRESET_MONTECARLO_HPP
#define QRESET_MONTECARLO_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qreset/distributions.hpp"
#include "qreset/errors.hpp"
#include "qreset/parallel.hpp"
#include "qreset/random.hpp"
#include "qreset/spectral.hpp"

namespace qreset {

/// Number of batch means behind every Monte-Carlo standard error.
inline constexpr std::size_t kBatchCount = 20;

/// A trajectory aborts after this many resets.
inline constexpr std::uint64_t kRunawayResets = 1'000'000'000ULL;

struct LastReset {
  double epoch;         // 0 when no reset occurred
  std::uint64_t count;  // resets in [0, t]
};

/// Accumulates waiting times until they pass t and reports the last epoch.
template <class Rng>
LastReset sample_last_reset(const ResetDistribution& dist, double t, Rng& rng) {
  LastReset out{0.0, 0};
  double epoch = 0.0;
  for (;;) {
    epoch += sample_interval(dist, rng);
    if (epoch > t) return out;
    out.epoch = epoch;
    if (++out.count >= kRunawayResets) throw RunawayError("sample_last_reset: more than 1e9 resets");
  }
}

/// One realization of the reset ensemble at time t: ρ(t - s_last).
template <class Trajectory, class Rng>
DensityMatrix sample_trajectory_state(Trajectory&& rho_traj, const ResetDistribution& dist, double t, Rng& rng) {
  const LastReset last = sample_last_reset(dist, t, rng);
  return rho_traj(t - last.epoch);
}

struct EnsembleEstimate {
  std::vector<double> times;
  std::vector<DensityMatrix> mean_state;
  std::size_t n_trajectories = 0;
  std::vector<Eigen::MatrixXd> std_error_real;  // per element, batch means
  std::vector<Eigen::MatrixXd> std_error_imag;
};

/// Ensemble average of the reset process on a time grid.
///
/// Trajectory j draws from StreamRng(seed, j) one sequence of reset epochs
/// covering the whole grid and contributes ρ(t_i - s_last(t_i)) at each
/// grid time. Trajectories are split into 20 contiguous batches; batch sums
/// are reduced in order, so the result does not depend on `threads`.
/// Standard errors are NaN when fewer than two batches exist (n < 2).
template <class Trajectory>
EnsembleEstimate estimate_reset_state(Trajectory&& rho_traj, const ResetDistribution& dist,
                                      std::span<const double> grid, std::size_t n, std::uint64_t seed,
                                      unsigned threads = 0) {
  if (n == 0) throw DomainError("estimate_reset_state: need at least one trajectory");
  if (grid.empty()) throw DomainError("estimate_reset_state: empty time grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0) || (i > 0 && grid[i] < grid[i - 1])) {
      throw DomainError("estimate_reset_state: grid must be non-negative and non-decreasing");
    }
  }
  const Eigen::Index d = rho_traj(0.0).dim();
  const std::size_t batches = std::min(kBatchCount, n);
  const std::size_t nt = grid.size();
  // sums[b][i]: batch b, grid time i
  std::vector<std::vector<ComplexMatrix>> sums(batches, std::vector<ComplexMatrix>(nt, ComplexMatrix::Zero(d, d)));

  for_each_batch(batches, threads, [&](std::size_t b) {
    const auto range = batch_range(n, batches, b);
    auto& acc = sums[b];
    for (std::size_t j = range.begin; j < range.end; ++j) {
      StreamRng rng(seed, j);
      double last = 0.0;
      double next = sample_interval(dist, rng);
      std::uint64_t resets = 0;
      for (std::size_t i = 0; i < nt; ++i) {
        while (next <= grid[i]) {
          last = next;
          next += sample_interval(dist, rng);
          if (++resets >= kRunawayResets) throw RunawayError("estimate_reset_state: more than 1e9 resets");
        }
        const DensityMatrix state = rho_traj(grid[i] - last);
        if (state.dim() != d) throw DimensionError("estimate_reset_state: trajectory changes dimension");
        acc[i] += state.matrix();
      }
    }
  });

  EnsembleEstimate out;
  out.times.assign(grid.begin(), grid.end());
  out.n_trajectories = n;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < nt; ++i) {
    ComplexMatrix total = ComplexMatrix::Zero(d, d);
    for (std::size_t b = 0; b < batches; ++b) total += sums[b][i];
    ComplexMatrix mean = total / static_cast<double>(n);
    for (Eigen::Index a = 0; a < d; ++a) {
      mean(a, a) = Complex(mean(a, a).real(), 0.0);
      for (Eigen::Index c = a + 1; c < d; ++c) mean(c, a) = std::conj(mean(a, c));
    }
    Eigen::MatrixXd se_re = Eigen::MatrixXd::Constant(d, d, nan);
    Eigen::MatrixXd se_im = Eigen::MatrixXd::Constant(d, d, nan);
    if (batches >= 2) {
      Eigen::MatrixXd ss_re = Eigen::MatrixXd::Zero(d, d);
      Eigen::MatrixXd ss_im = Eigen::MatrixXd::Zero(d, d);
      for (std::size_t b = 0; b < batches; ++b) {
        const auto range = batch_range(n, batches, b);
        const ComplexMatrix dev = sums[b][i] / static_cast<double>(range.end - range.begin) - mean;
        ss_re += dev.real().cwiseAbs2();
        ss_im += dev.imag().cwiseAbs2();
      }
      const double norm = static_cast<double>(batches) * static_cast<double>(batches - 1);
      se_re = (ss_re / norm).cwiseSqrt();
      se_im = (ss_im / norm).cwiseSqrt();
    }
    out.mean_state.push_back(DensityMatrix::unchecked(std::move(mean)));
    out.std_error_real.push_back(std::move(se_re));
    out.std_error_imag.push_back(std::move(se_im));
  }
  return out;
}

struct MotResult {
  double mean;
  double std_error;  // batch means; NaN for n < 2
  std::size_t n_samples;
};

/// One draw of the orthogonality time under restart: waiting times shorter
/// than τ interrupt the evolution and are added to the clock; the first
/// waiting time ≥ τ lets the evolution finish and contributes τ.
template <class Rng>
double sample_orthogonality_time(double tau, const ResetDistribution& dist, Rng& rng,
                                 std::uint64_t max_resets = kRunawayResets) {
  double total = 0.0;
  for (std::uint64_t resets = 0;; ++resets) {
    if (resets >= max_resets) {
      throw RunawayError("mean_orthogonality_time_mc: " + std::to_string(max_resets) +
                         " resets in one run; mean time effectively divergent");
    }
    const double t = sample_interval(dist, rng);
    if (t >= tau) return total + tau;
    total += t;
  }
}

/// Monte-Carlo mean orthogonality time from n independent runs; run j uses
/// StreamRng(seed, j).
inline MotResult mean_orthogonality_time_mc(double tau, const ResetDistribution& dist, std::size_t n, std::uint64_t seed,
                                            unsigned threads = 0, std::uint64_t max_resets = kRunawayResets) {
  if (!(tau > 0.0)) throw DomainError("mean_orthogonality_time_mc: tau must be positive");
  if (n == 0) throw DomainError("mean_orthogonality_time_mc: need at least one run");
  const std::size_t batches = std::min(kBatchCount, n);
  std::vector<double> sums(batches, 0.0);
  for_each_batch(batches, threads, [&](std::size_t b) {
    const auto range = batch_range(n, batches, b);
    double acc = 0.0;
    for (std::size_t j = range.begin; j < range.end; ++j) {
      StreamRng rng(seed, j);
      acc += sample_orthogonality_time(tau, dist, rng, max_resets);
    }
    sums[b] = acc;
  });
  double total = 0.0;
  for (double s : sums) total += s;
  const double mean = total / static_cast<double>(n);
  double se = std::numeric_limits<double>::quiet_NaN();
  if (batches >= 2) {
    double ss = 0.0;
    for (std::size_t b = 0; b < batches; ++b) {
      const auto range = batch_range(n, batches, b);
      const double dev = sums[b] / static_cast<double>(range.end - range.begin) - mean;
      ss += dev * dev;
    }
    se = std::sqrt(ss / (static_cast<double>(batches) * static_cast<double>(batches - 1)));
  }
  return {mean, se, n};
}

}  // namespace qreset

#endif  // QRESET_MONTECARLO_HPP

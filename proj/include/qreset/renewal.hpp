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

#ifndef QRESET_RENEWAL_HPP
#define QRESET_RENEWAL_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qreset/distributions.hpp"
#include "qreset/errors.hpp"
#include "qreset/quadrature.hpp"
#include "qreset/spectral.hpp"

namespace qreset {

/// Tables of T(t_k) and T0(t_k) on the uniform grid t_k = k h, k = 0..K,
/// together with the quadrature weights of the renewal convolution
///
///   ∫_0^{t_k} ds T(s) T0(t_k - s) g(s)  ≈  Σ_j w_kj g(s_j).
///
/// Product integration: g is interpolated linearly between grid points and
/// the product T(s) T0(t_k - s) is integrated against each hat function
/// panel by panel. Interior panels use 4-point Gauss-Legendre. When T(s) or
/// 1 - T0(u) starts as a fractional power (gamma law with non-integer beta),
/// the end panels get dedicated rules: at s = 0 the substitution
/// s = h v^{1/beta} makes T(s) ds a power series in v, and at u = 0 a
/// Gauss-Jacobi rule carries u^beta as weight. Each row is then rescaled so that T0(t_k) + Σ_j w_kj = 1; the
/// raw discrepancy is the normalization residual checked at build time.
class ResetKernelTable {
 public:
  double step() const noexcept { return h_; }
  std::size_t steps() const noexcept { return reset_.size() - 1; }
  double time(std::size_t k) const noexcept { return static_cast<double>(k) * h_; }
  double reset_density(std::size_t k) const { return reset_.at(k); }
  double survival(std::size_t k) const { return survival_.at(k); }
  std::span<const double> reset_table() const noexcept { return reset_; }
  std::span<const double> survival_table() const noexcept { return survival_; }

  /// Law the table was built from; empty for the no-reset kernel.
  const std::optional<ResetDistribution>& distribution() const noexcept { return dist_; }

  /// T0(t_k) + Σ_j w_kj - 1 before rescaling.
  double normalization_residual(std::size_t k) const { return residual_.at(k); }
  double max_normalization_residual() const noexcept {
    double r = 0.0;
    for (double v : residual_) r = std::max(r, std::abs(v));
    return r;
  }

  /// Writes w_k0..w_kk into `out` (resized to k+1).
  void weights(std::size_t k, std::vector<double>& out) const {
    check_index(k);
    raw_weights(k, out);
    for (double& w : out) w *= scale_[k];
  }

  /// Σ_j w_kj g(j), where g(j) is the integrand factor at s_j = j h.
  template <class G>
  auto integrate(std::size_t k, G&& g) const -> decltype(g(std::size_t{0}) * 1.0) {
    using Value = decltype(g(std::size_t{0}) * 1.0);
    std::vector<double> w;
    weights(k, w);
    Value acc = g(std::size_t{0}) * 0.0;
    for (std::size_t j = 0; j <= k; ++j) {
      if (w[j] != 0.0) acc += g(j) * w[j];
    }
    return acc;
  }

  /// out_c[k] = T0(t_k) v_c[k] + Σ_j w_kj v_c[k-j] for every component c:
  /// the renewal average of a trajectory sampled on this grid.
  template <class Scalar>
  std::vector<std::vector<Scalar>> convolve_components(const std::vector<std::vector<Scalar>>& components) const {
    const std::size_t n = reset_.size();
    for (const auto& c : components) {
      if (c.size() != n) {
        throw DimensionError("renewal convolution: trajectory has " + std::to_string(c.size()) +
                             " samples, kernel grid has " + std::to_string(n));
      }
    }
    std::vector<std::vector<Scalar>> out(components.size(), std::vector<Scalar>(n));
    std::vector<double> w;
    for (std::size_t k = 0; k < n; ++k) {
      weights(k, w);
      for (std::size_t c = 0; c < components.size(); ++c) {
        const auto& v = components[c];
        Scalar acc = survival_[k] * v[k];
        for (std::size_t j = 0; j <= k; ++j) acc += w[j] * v[k - j];
        out[c][k] = acc;
      }
    }
    return out;
  }

 private:
  friend ResetKernelTable build_kernel(const ResetDistribution&, double, std::size_t, std::optional<double>);
  friend ResetKernelTable build_no_reset_kernel(double, std::size_t);

  static constexpr int kPanelNodes = 4;
  static constexpr int kEndNodes = 8;

  ResetKernelTable() = default;

  void check_index(std::size_t k) const {
    if (k >= reset_.size()) {
      throw DomainError("kernel index " + std::to_string(k) + " out of range (K = " + std::to_string(steps()) + ")");
    }
  }

  std::size_t panels() const noexcept { return reset_.size() - 1; }

  // Gauss-Legendre panels p in [p0, p1) of row k.
  void add_regular_panels(std::size_t k, std::size_t p0, std::size_t p1, std::vector<double>& out) const {
    if (p1 <= p0) return;
    const std::size_t K = panels();
    const std::size_t len = p1 - p0;
    thread_local std::vector<double> left, right;
    left.assign(len, 0.0);
    right.assign(len, 0.0);
    for (int g = 0; g < kPanelNodes; ++g) {
      // T0 at t_k - (p + x_g) h = (k - 1 - p + x_{G-1-g}) h, stored reversed.
      const double* a = t_nodes_[g].data() + p0;
      const double* b = t0_nodes_rev_[kPanelNodes - 1 - g].data() + (K - k) + p0;
      const double xr = panel_x_[g];
      const double xl = 1.0 - xr;
      for (std::size_t i = 0; i < len; ++i) {
        const double f = a[i] * b[i];
        left[i] += f * xl;
        right[i] += f * xr;
      }
    }
    for (std::size_t i = 0; i < len; ++i) {
      out[p0 + i] += left[i];
      out[p0 + i + 1] += right[i];
    }
  }

  void raw_weights(std::size_t k, std::vector<double>& out) const {
    out.assign(k + 1, 0.0);
    if (k == 0) return;
    if (!singular_) {
      add_regular_panels(k, 0, k, out);
      return;
    }
    if (k == 1) {
      out[0] = first_row_[0];
      out[1] = first_row_[1];
      return;
    }
    add_regular_panels(k, 1, k - 1, out);
    // s-end panel, nodes at fractions y_i.
    for (int i = 0; i < kEndNodes; ++i) {
      const double f = s_end_[i] * t0_at_s_end_[i][k - 1];
      out[0] += f * (1.0 - s_end_y_[i]);
      out[1] += f * s_end_y_[i];
    }
    // u-end panel: T0(u) = 1 - u^γ0 B(u). The "1" part is regular in s.
    const std::size_t q = k - 1;
    for (int g = 0; g < kPanelNodes; ++g) {
      const double f = t_nodes_[g][q];
      out[q] += f * (1.0 - panel_x_[g]);
      out[k] += f * panel_x_[g];
    }
    for (int i = 0; i < kEndNodes; ++i) {
      // s = t_k - z h sits at fraction 1 - z of the panel.
      const double f = u_end_[i] * t_at_u_end_[i][q];
      out[q] -= f * u_end_z_[i];
      out[k] -= f * (1.0 - u_end_z_[i]);
    }
  }

  // Σ_j w_kj before rescaling, without splitting panels into hat weights.
  double raw_row_sum(std::size_t k, std::vector<double>& scratch) const {
    if (k == 0) return 0.0;
    if (singular_ && k <= 2) {
      raw_weights(k, scratch);
      return std::accumulate(scratch.begin(), scratch.end(), 0.0);
    }
    const std::size_t K = panels();
    const std::size_t p0 = singular_ ? 1 : 0;
    const std::size_t p1 = singular_ ? k - 1 : k;
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    for (int g = 0; g < kPanelNodes; ++g) {
      const double* a = t_nodes_[g].data();
      const double* b = t0_nodes_rev_[kPanelNodes - 1 - g].data() + (K - k);
      std::size_t p = p0;
      for (; p + 4 <= p1; p += 4) {
        acc[0] += a[p] * b[p];
        acc[1] += a[p + 1] * b[p + 1];
        acc[2] += a[p + 2] * b[p + 2];
        acc[3] += a[p + 3] * b[p + 3];
      }
      for (; p < p1; ++p) acc[0] += a[p] * b[p];
    }
    double sum = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    if (singular_) {
      for (int i = 0; i < kEndNodes; ++i) sum += s_end_[i] * t0_at_s_end_[i][k - 1] - u_end_[i] * t_at_u_end_[i][k - 1];
      for (int g = 0; g < kPanelNodes; ++g) sum += t_nodes_[g][k - 1];
    }
    return sum;
  }

  void finalize() {
    const std::size_t n = reset_.size();
    residual_.assign(n, 0.0);
    scale_.assign(n, 1.0);
    std::vector<double> scratch;
    for (std::size_t k = 1; k < n; ++k) {
      const double raw = raw_row_sum(k, scratch);
      residual_[k] = survival_[k] + raw - 1.0;
      if (raw > 0.0) scale_[k] = (1.0 - survival_[k]) / raw;
    }
  }

  double h_ = 0.0;
  std::vector<double> reset_;
  std::vector<double> survival_;
  std::vector<double> residual_;
  std::vector<double> scale_;
  std::optional<ResetDistribution> dist_;

  std::array<double, kPanelNodes> panel_x_{};
  std::array<std::vector<double>, kPanelNodes> t_nodes_;       // h w_g T((p + x_g) h)
  std::array<std::vector<double>, kPanelNodes> t0_nodes_rev_;  // T0((m + x_g) h) at K-1-m

  bool singular_ = false;
  std::array<double, kEndNodes> s_end_y_{};
  std::array<double, kEndNodes> s_end_{};  // weight times T(y_i h)
  std::array<std::vector<double>, kEndNodes> t0_at_s_end_;  // T0((m + 1 - y_i) h)
  std::array<double, kEndNodes> u_end_z_{};
  std::array<double, kEndNodes> u_end_{};  // h w_i (1 - T0(z_i h)) / z_i^γ0
  std::array<std::vector<double>, kEndNodes> t_at_u_end_;  // T((q + 1 - z_i) h)
  std::array<double, 2> first_row_{};
};

namespace detail {

inline bool is_integral(double x) { return x == std::floor(x); }

}  // namespace detail

/// Default normalization tolerance 1e-5 (1 + K h alpha).
inline double default_normalization_tolerance(const ResetDistribution& dist, double h, std::size_t K) {
  return 1e-5 * (1.0 + static_cast<double>(K) * h * dist.alpha());
}

/// Tabulates T and T0 for `dist` on k h, k = 0..K, and verifies the renewal
/// normalization T0(t) + ∫ T(s) T0(t-s) ds = 1 at every grid point.
/// Throws InvariantError("renewal normalization") when h is too coarse.
inline ResetKernelTable build_kernel(const ResetDistribution& dist, double h, std::size_t K,
                                     std::optional<double> tolerance = std::nullopt) {
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("build_kernel: step must be positive");
  if (K < 2) throw DomainError("build_kernel: need K >= 2");
  using Table = ResetKernelTable;
  Table table;
  table.h_ = h;
  table.dist_ = dist;
  table.reset_.resize(K + 1);
  table.survival_.resize(K + 1);
  table.reset_[0] = reset_density_at_origin(dist);
  table.survival_[0] = 1.0;
  for (std::size_t k = 1; k <= K; ++k) {
    const double t = static_cast<double>(k) * h;
    table.reset_[k] = reset_density_t(dist, t);
    table.survival_[k] = survival_t0(dist, t);
    if (table.survival_[k] > table.survival_[k - 1]) {
      throw InvariantError("survival monotonicity", "T0 increases at t = " + std::to_string(t));
    }
  }

  const auto legendre = gauss_legendre01(Table::kPanelNodes);
  for (int g = 0; g < Table::kPanelNodes; ++g) {
    const double x = legendre.nodes[static_cast<std::size_t>(g)];
    const double wg = legendre.weights[static_cast<std::size_t>(g)];
    table.panel_x_[g] = x;
    auto& tn = table.t_nodes_[g];
    auto& t0n = table.t0_nodes_rev_[g];
    tn.resize(K);
    t0n.resize(K);
    for (std::size_t p = 0; p < K; ++p) {
      const double s = (static_cast<double>(p) + x) * h;
      tn[p] = h * wg * reset_density_t(dist, s);
      t0n[K - 1 - p] = survival_t0(dist, s);
    }
  }

  const auto onset = reset_density_onset(dist);
  const auto deficit = survival_deficit_onset(dist);
  if (onset && deficit && (!detail::is_integral(onset->exponent) || !detail::is_integral(deficit->exponent))) {
    table.singular_ = true;
    const double ga = onset->exponent;
    const double gb = deficit->exponent;
    // s-end: s = h v^{1/(γ+1)} turns T(s) ds into a power series in v.
    const double pw = 1.0 / (ga + 1.0);
    const auto vs = gauss_legendre01(Table::kEndNodes);
    const auto zs = gauss_jacobi01(Table::kEndNodes, gb, 0.0);
    // k = 1: the deficit factor (h - s)^γ0 becomes (1 - v)^γ0 at the far end.
    const auto vs1 = gauss_jacobi01(Table::kEndNodes, 0.0, gb);
    double w0 = 0.0;
    double w1 = 0.0;
    for (int i = 0; i < Table::kEndNodes; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      const double v = vs.nodes[ii];
      const double y = std::pow(v, pw);
      table.s_end_y_[i] = y;
      table.s_end_[i] = vs.weights[ii] * h * pw * std::pow(v, pw - 1.0) * reset_density_t(dist, y * h);
      auto& t0s = table.t0_at_s_end_[i];
      t0s.resize(K);
      for (std::size_t m = 0; m < K; ++m) t0s[m] = survival_t0(dist, (static_cast<double>(m) + 1.0 - y) * h);
      w0 += table.s_end_[i] * (1.0 - y);
      w1 += table.s_end_[i] * y;

      const double z = zs.nodes[ii];
      table.u_end_z_[i] = z;
      table.u_end_[i] = h * zs.weights[ii] * reset_cdf(dist, z * h) / std::pow(z, gb);
      auto& tu = table.t_at_u_end_[i];
      tu.resize(K);
      for (std::size_t q = 0; q < K; ++q) tu[q] = reset_density_t(dist, (static_cast<double>(q) + 1.0 - z) * h);

      const double v1 = vs1.nodes[ii];
      const double y1 = std::pow(v1, pw);
      const double f = vs1.weights[ii] * h * pw * std::pow(v1, pw - 1.0) * reset_density_t(dist, y1 * h) *
                       reset_cdf(dist, (1.0 - y1) * h) / std::pow(1.0 - v1, gb);
      w0 -= f * (1.0 - y1);
      w1 -= f * y1;
    }
    table.first_row_ = {w0, w1};
  }

  table.finalize();
  const double tol = tolerance.value_or(default_normalization_tolerance(dist, h, K));
  for (std::size_t k = 0; k <= K; ++k) {
    if (std::abs(table.residual_[k]) > tol) {
      throw InvariantError("renewal normalization",
                           "residual " + std::to_string(table.residual_[k]) + " at t = " + std::to_string(table.time(k)) +
                               " exceeds " + std::to_string(tol) + "; reduce the step");
    }
  }
  return table;
}

/// Kernel of the process without resets: T = 0, T0 = 1.
inline ResetKernelTable build_no_reset_kernel(double h, std::size_t K) {
  if (!(h > 0.0)) throw DomainError("build_no_reset_kernel: step must be positive");
  if (K < 2) throw DomainError("build_no_reset_kernel: need K >= 2");
  ResetKernelTable table;
  table.h_ = h;
  table.reset_.assign(K + 1, 0.0);
  table.survival_.assign(K + 1, 1.0);
  for (auto& v : table.t_nodes_) v.assign(K, 0.0);
  for (auto& v : table.t0_nodes_rev_) v.assign(K, 1.0);
  table.finalize();
  return table;
}

/// I_nm at one grid time for one transition frequency.
struct InmFactor {
  Complex value;
  double frequency;
  double time;
};

/// I(t_k) = T0(t_k) + ∫_0^{t_k} ds e^{iωs} T(s) T0(t_k - s).
inline InmFactor inm(const ResetKernelTable& kernel, double omega, std::size_t k) {
  const double t = kernel.time(k);
  if (omega == 0.0) {
    (void)kernel.survival(k);  // range check
    return {Complex(1.0, 0.0), omega, t};
  }
  const double h = kernel.step();
  const Complex conv = kernel.integrate(k, [&](std::size_t j) { return std::polar(1.0, omega * h * static_cast<double>(j)); });
  return {kernel.survival(k) + conv, omega, t};
}

/// I(t_k) for every k = 0..K. O(K^2).
inline std::vector<Complex> inm_series(const ResetKernelTable& kernel, double omega) {
  const std::size_t n = kernel.steps() + 1;
  std::vector<Complex> out(n, Complex(1.0, 0.0));
  if (omega == 0.0) return out;
  std::vector<Complex> phase(n);
  for (std::size_t j = 0; j < n; ++j) phase[j] = std::polar(1.0, omega * kernel.step() * static_cast<double>(j));
  std::vector<double> w;
  for (std::size_t k = 0; k < n; ++k) {
    kernel.weights(k, w);
    Complex acc = kernel.survival(k);
    for (std::size_t j = 0; j <= k; ++j) acc += w[j] * phase[j];
    out[k] = acc;
  }
  return out;
}

/// Closed form of I(t) for exponential resetting:
///   e^{-iωt} I(t) = [α + iω e^{-αt} e^{-iωt}] / (α + iω).
inline Complex inm_exponential_closed_form(double alpha, double omega, double t) {
  const Complex i(0.0, 1.0);
  const Complex dressed = (alpha + i * omega * std::exp(-alpha * t) * std::polar(1.0, -omega * t)) / (alpha + i * omega);
  return std::polar(1.0, omega * t) * dressed;
}

/// Matrix of I_nm(t_k) over all level pairs (ones on the diagonal).
inline ComplexMatrix inm_matrix(const ResetKernelTable& kernel, const Spectrum& spec, std::size_t k) {
  const auto d = spec.dim();
  ComplexMatrix out = ComplexMatrix::Ones(d, d);
  for (Eigen::Index n = 0; n < d; ++n) {
    for (Eigen::Index m = n + 1; m < d; ++m) {
      const Complex v = inm(kernel, spec.frequency(n, m), k).value;
      out(n, m) = v;
      out(m, n) = std::conj(v);
    }
  }
  return out;
}

/// 𝓘_nm(t) = e^{-iω_nm t} I_nm(t): resetting and unitary phase together.
inline ComplexMatrix dressed_inm_matrix(const ComplexMatrix& inm_values, const Spectrum& spec, double t) {
  ComplexMatrix out = inm_values;
  for (Eigen::Index n = 0; n < spec.dim(); ++n) {
    for (Eigen::Index m = 0; m < spec.dim(); ++m) {
      if (n != m) out(n, m) *= std::polar(1.0, -spec.frequency(n, m) * t);
    }
  }
  return out;
}

/// Eigenvalue below which an assembled state is rejected (quadrature grid
/// too coarse). Between this and DensityMatrix::kEigenvalueFloor callers may
/// warn.
inline constexpr double kPositivityHardFloor = -1e-6;

namespace detail {

inline DensityMatrix checked_assembly(ComplexMatrix m, const char* where) {
  const auto diag = diagnose_state(m);
  if (diag.min_eigenvalue < kPositivityHardFloor) {
    throw InvariantError("positivity", std::string(where) + ": min eigenvalue " + std::to_string(diag.min_eigenvalue) +
                                           "; quadrature grid too coarse");
  }
  return DensityMatrix::unchecked(std::move(m));
}

}  // namespace detail

/// ρ_sr(t_k) = ρ_D + Σ_{n≠m} e^{-iω_nm t} I_nm(t) ρ_nm(0) |n⟩⟨m| for unitary
/// dynamics. Diagonal copied from rho0.
inline DensityMatrix reset_state(const DensityMatrix& rho0, const Spectrum& spec, const ResetKernelTable& kernel,
                                 std::size_t k) {
  require_same_dim(rho0, spec, "reset_state");
  const double t = kernel.time(k);
  const ComplexMatrix dressed = dressed_inm_matrix(inm_matrix(kernel, spec, k), spec, t);
  ComplexMatrix out = rho0.matrix().cwiseProduct(dressed);
  out.diagonal() = rho0.matrix().diagonal();
  return detail::checked_assembly(std::move(out), "reset_state");
}

/// reset_state at every grid time. O(d^2 K^2).
inline std::vector<DensityMatrix> reset_state_series(const DensityMatrix& rho0, const Spectrum& spec,
                                                     const ResetKernelTable& kernel) {
  require_same_dim(rho0, spec, "reset_state_series");
  const auto d = spec.dim();
  const std::size_t n = kernel.steps() + 1;
  const double h = kernel.step();
  struct Pair {
    Eigen::Index a, b;
    double omega;
    std::vector<Complex> phase;
  };
  std::vector<Pair> pairs;
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = a + 1; b < d; ++b) {
      Pair p{a, b, spec.frequency(a, b), std::vector<Complex>(n)};
      for (std::size_t j = 0; j < n; ++j) p.phase[j] = std::polar(1.0, p.omega * h * static_cast<double>(j));
      pairs.push_back(std::move(p));
    }
  }
  std::vector<DensityMatrix> out;
  out.reserve(n);
  std::vector<double> w;
  for (std::size_t k = 0; k < n; ++k) {
    kernel.weights(k, w);
    ComplexMatrix m = rho0.matrix();
    for (const auto& p : pairs) {
      Complex acc = kernel.survival(k);
      if (p.omega == 0.0) {
        acc = 1.0;
      } else {
        for (std::size_t j = 0; j <= k; ++j) acc += w[j] * p.phase[j];
      }
      const Complex v = rho0(p.a, p.b) * std::conj(p.phase[k]) * acc;
      m(p.a, p.b) = v;
      m(p.b, p.a) = std::conj(v);
    }
    out.push_back(detail::checked_assembly(std::move(m), "reset_state_series"));
  }
  return out;
}

/// ρ_sr(t) = T0(t) ρ(t) + ∫ ds T(s) T0(t-s) ρ(t-s) for an arbitrary
/// dynamical map, given the non-reset trajectory ρ(t_k) on the kernel grid.
inline std::vector<DensityMatrix> reset_map_convolve(std::span<const DensityMatrix> trajectory,
                                                     const ResetKernelTable& kernel) {
  const std::size_t n = kernel.steps() + 1;
  if (trajectory.size() != n) {
    throw DimensionError("reset_map_convolve: trajectory has " + std::to_string(trajectory.size()) +
                         " samples, kernel grid has " + std::to_string(n));
  }
  const auto d = trajectory.front().dim();
  std::vector<std::vector<Complex>> components;
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = a; b < d; ++b) {
      std::vector<Complex> c(n);
      for (std::size_t k = 0; k < n; ++k) {
        if (trajectory[k].dim() != d) throw DimensionError("reset_map_convolve: mixed state dimensions");
        c[k] = trajectory[k](a, b);
      }
      components.push_back(std::move(c));
    }
  }
  const auto conv = kernel.convolve_components(components);
  std::vector<DensityMatrix> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    ComplexMatrix m(d, d);
    std::size_t c = 0;
    for (Eigen::Index a = 0; a < d; ++a) {
      for (Eigen::Index b = a; b < d; ++b, ++c) {
        m(a, b) = conv[c][k];
        if (a != b) m(b, a) = std::conj(conv[c][k]);
      }
    }
    out.push_back(detail::checked_assembly(std::move(m), "reset_map_convolve"));
  }
  return out;
}

}  // namespace qreset

#endif  // QRESET_RENEWAL_HPP

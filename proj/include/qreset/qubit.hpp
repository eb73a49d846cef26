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

#ifndef QRESET_QUBIT_HPP
#define QRESET_QUBIT_HPP

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "qreset/distributions.hpp"
#include "qreset/equilibrium.hpp"
#include "qreset/errors.hpp"
#include "qreset/renewal.hpp"
#include "qreset/spectral.hpp"
#include "qreset/special_functions.hpp"

namespace qreset {

/// ϱ = (1 + r·σ)/2.
struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const noexcept { return std::sqrt(x * x + y * y + z * z); }
  friend bool operator==(const BlochVector&, const BlochVector&) = default;
};

/// Qubit with H = (ω/2)σ_z. Level 0 is the σ_z = -1 state (energy -ω/2),
/// level 1 the σ_z = +1 state, so that the spectrum is ascending.
inline Spectrum qubit_spectrum(double omega) {
  if (!(omega > 0.0)) throw DomainError("qubit_spectrum: omega must be positive");
  return Spectrum({-0.5 * omega, 0.5 * omega});
}

/// Density matrix of r in the energy-ordered basis: ρ_11 = (1+z)/2,
/// ρ_10 = (x - iy)/2.
inline DensityMatrix bloch_to_density(const BlochVector& r) {
  if (r.norm() > 1.0 + 1e-10) throw DomainError("bloch_to_density: |r| > 1");
  ComplexMatrix m(2, 2);
  m(0, 0) = 0.5 * (1.0 - r.z);
  m(1, 1) = 0.5 * (1.0 + r.z);
  m(1, 0) = Complex(0.5 * r.x, -0.5 * r.y);
  m(0, 1) = std::conj(m(1, 0));
  return DensityMatrix::unchecked(std::move(m));
}

inline BlochVector bloch_from_density(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw DimensionError("bloch_from_density: state is not a qubit");
  return {2.0 * rho(1, 0).real(), -2.0 * rho(1, 0).imag(), rho(1, 1).real() - rho(0, 0).real()};
}

/// Rotation of r by `angle` about the unit vector `axis` (right-handed),
/// the SO(3) image of exp(-i angle axis·σ/2).
inline BlochVector bloch_rotate(const BlochVector& r, const std::array<double, 3>& axis, double angle) {
  const double n2 = axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2];
  if (std::abs(std::sqrt(n2) - 1.0) > 1e-12) throw DomainError("bloch_rotate: axis must be a unit vector");
  const auto [nx, ny, nz] = axis;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double dot = nx * r.x + ny * r.y + nz * r.z;
  const double cx = ny * r.z - nz * r.y;
  const double cy = nz * r.x - nx * r.z;
  const double cz = nx * r.y - ny * r.x;
  return {r.x * c + cx * s + nx * dot * (1.0 - c), r.y * c + cy * s + ny * dot * (1.0 - c),
          r.z * c + cz * s + nz * dot * (1.0 - c)};
}

/// Free precession under H = (ω/2)σ_z.
inline BlochVector bloch_unitary(const BlochVector& r0, double omega, double t) {
  return bloch_rotate(r0, {0.0, 0.0, 1.0}, omega * t);
}

/// r_sr(t_k) = T0(t_k) r(t_k) + Σ_j w_kj r(t_k - s_j).
inline std::vector<BlochVector> bloch_reset_trajectory(std::span<const BlochVector> r_traj,
                                                       const ResetKernelTable& kernel) {
  std::vector<std::vector<double>> comps(3, std::vector<double>(r_traj.size()));
  for (std::size_t k = 0; k < r_traj.size(); ++k) {
    comps[0][k] = r_traj[k].x;
    comps[1][k] = r_traj[k].y;
    comps[2][k] = r_traj[k].z;
  }
  const auto conv = kernel.convolve_components(comps);
  std::vector<BlochVector> out(r_traj.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = {conv[0][k], conv[1][k], conv[2][k]};
  return out;
}

/// Equilibrium Bloch vector for gamma or exponential resetting under
/// H = (ω/2)σ_z, with Θ = arctan(ω/α) and c = cos^β Θ:
///   x = (α/(βω)) [c sin(βΘ) x0 + (c cos(βΘ) - 1) y0]
///   y = (α/(βω)) [c sin(βΘ) y0 + (1 - c cos(βΘ)) x0]
/// z is unchanged. Lévy-Smirnoff resetting leaves (0, 0, z0).
inline BlochVector equilibrium_bloch(const BlochVector& r0, double omega, const ResetDistribution& dist) {
  if (dist.kind() == DistributionKind::LevySmirnoff) return {0.0, 0.0, r0.z};
  if (omega == 0.0) return r0;
  const double a = dist.alpha();
  const double b = dist.shape();
  const double theta = std::atan(omega / a);
  const double c = std::pow(a / std::hypot(a, omega), b);
  const double pre = a / (b * omega);
  const double sin_part = c * std::sin(b * theta);
  const double cos_part = 1.0 - c * std::cos(b * theta);
  return {pre * (sin_part * r0.x - cos_part * r0.y), pre * (sin_part * r0.y + cos_part * r0.x), r0.z};
}

/// τ = π/|ω|, the quickest an equal superposition reaches an orthogonal state.
inline double orthogonality_time(double omega) {
  if (omega == 0.0 || !std::isfinite(omega)) throw DomainError("orthogonality_time: omega must be non-zero");
  return std::numbers::pi / std::abs(omega);
}

/// ⟨τ_sr⟩ = τ + ∫_0^τ t T1 dt / ∫_τ^∞ T1 dt in closed form.
inline double mot_analytic(double tau, const ResetDistribution& dist) {
  if (!(tau > 0.0)) throw DomainError("mot_analytic: tau must be positive");
  const double a = dist.alpha();
  const double x = a * tau;
  switch (dist.kind()) {
    case DistributionKind::Exponential:
      return std::expm1(x) / a;
    case DistributionKind::Gamma: {
      const double b = *dist.beta();
      return tau + special::lower_incomplete_gamma(b + 1.0, x) / (a * special::upper_incomplete_gamma(b, x));
    }
    case DistributionKind::LevySmirnoff: {
      // τ + 1/α + (√(2ατ/π) e^{-u²} - 1)/(α erf u), u = 1/√(2ατ), regrouped
      // so the 1/α and -1/(α erf u) pieces cancel analytically.
      const double u = 1.0 / std::sqrt(2.0 * x);
      const double g = std::sqrt(2.0 * x / std::numbers::pi) * std::exp(-u * u);
      return tau + (g - special::erfc(u)) / (a * special::erf(u));
    }
  }
  return tau;
}

struct SmallTimeKernels {
  double R;  // (1/2) ∫ T(s) T0(t-s) s² ds
  double I;  // ∫ T(s) T0(t-s) s ds
};

/// For |ω| t ≪ 1: 1 - Re I_ω(t) ≈ ω² R(t) and Im I_ω(t) ≈ ω I(t).
inline SmallTimeKernels small_time_kernels(const ResetKernelTable& kernel, std::size_t k) {
  const double h = kernel.step();
  const double second = kernel.integrate(k, [h](std::size_t j) {
    const double s = h * static_cast<double>(j);
    return s * s;
  });
  const double first = kernel.integrate(k, [h](std::size_t j) { return h * static_cast<double>(j); });
  return {0.5 * second, first};
}

/// ΔP for a qubit with population p = |c_i|² and dressing factor I.
inline double qubit_purity_loss(double population, Complex inm_value) {
  return 2.0 * population * (1.0 - population) * (1.0 - std::norm(inm_value));
}

/// Δℱ for a pure qubit with population p = |c_i|² and dressing factor I.
inline double qubit_fidelity_deviation(double population, Complex inm_value) {
  return 2.0 * population * (1.0 - population) * (1.0 - inm_value.real());
}

/// Resonant Jaynes-Cummings atom prepared in a|g⟩ + b|e⟩ with the field in
/// vacuum, coupling Ω, interaction picture.
class JaynesCummingsModel {
 public:
  JaynesCummingsModel(double a, double b, double omega_coupling) : a_(a), b_(b), omega_(omega_coupling) {
    if (std::abs(a * a + b * b - 1.0) > 1e-12) throw DomainError("JaynesCummingsModel: need a^2 + b^2 = 1");
    if (!(omega_coupling > 0.0)) throw DomainError("JaynesCummingsModel: coupling must be positive");
  }

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double coupling() const noexcept { return omega_; }

  /// Probability that the excitation sits in the field: sin²(Ωt/2).
  double population(double t) const {
    const double s = std::sin(0.5 * omega_ * t);
    return s * s;
  }

 private:
  double a_;
  double b_;
  double omega_;
};

/// r(p) = (2ab√(1-p), 0, 1 - 2b²(1-p)).
inline BlochVector jc_bloch_from_population(const JaynesCummingsModel& model, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("jc_bloch_from_population: p must lie in [0, 1]");
  const double q = 1.0 - p;
  return {2.0 * model.a() * model.b() * std::sqrt(q), 0.0, 1.0 - 2.0 * model.b() * model.b() * q};
}

/// r(t) = (2ab cos(Ωt/2), 0, 1 - 2b² cos²(Ωt/2)); period 4π/Ω in x, 2π/Ω in z.
inline BlochVector jc_bloch(const JaynesCummingsModel& model, double t) {
  const double c = std::cos(0.5 * model.coupling() * t);
  return {2.0 * model.a() * model.b() * c, 0.0, 1.0 - 2.0 * model.b() * model.b() * c * c};
}

struct JcSimulation {
  std::vector<double> times;
  std::vector<BlochVector> free;   // without resetting
  std::vector<BlochVector> reset;  // with resetting
};

/// JC atom trajectory on t_k = k h, k = 0..K, and its reset average.
inline JcSimulation jc_reset_simulation(const JaynesCummingsModel& model, const ResetKernelTable& kernel) {
  const std::size_t n = kernel.steps() + 1;
  JcSimulation out;
  out.times.resize(n);
  out.free.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.times[k] = kernel.time(k);
    out.free[k] = jc_bloch(model, out.times[k]);
  }
  out.reset = bloch_reset_trajectory(out.free, kernel);
  return out;
}

}  // namespace qreset

#endif  // QRESET_QUBIT_HPP

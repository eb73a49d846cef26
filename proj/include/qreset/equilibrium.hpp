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

#ifndef QRESET_EQUILIBRIUM_HPP
#define QRESET_EQUILIBRIUM_HPP

#include <cmath>
#include <complex>

#include "qreset/distributions.hpp"
#include "qreset/errors.hpp"
#include "qreset/observables.hpp"
#include "qreset/spectral.hpp"

namespace qreset {

namespace detail {

// e^z - 1 without cancellation for small |z|.
inline Complex expm1(Complex z) {
  const double x = z.real();
  const double y = z.imag();
  const double em1 = std::expm1(x);
  const double s = std::sin(0.5 * y);
  return {em1 * std::cos(y) - 2.0 * s * s, (em1 + 1.0) * std::sin(y)};
}

// log(1 + iu) for real u.
inline Complex log1p_i(double u) { return {0.5 * std::log1p(u * u), std::atan(u)}; }

// 1 - (α/(α+iω))^β = -expm1(-β log(1 + iω/α)).
inline Complex gamma_survival_laplace_numerator(double alpha, double beta, double omega) {
  return -expm1(-beta * log1p_i(omega / alpha));
}

}  // namespace detail

/// L = lim ε T̃(ε) and the Laplace transform T̃0(ε) on the imaginary axis.
class EquilibriumSpec {
 public:
  explicit EquilibriumSpec(const ResetDistribution& dist) : dist_(dist) {}

  /// α/β for gamma and exponential; 0 for Lévy-Smirnoff.
  double L() const noexcept {
    switch (dist_.kind()) {
      case DistributionKind::Exponential: return dist_.alpha();
      case DistributionKind::Gamma: return dist_.alpha() / *dist_.beta();
      case DistributionKind::LevySmirnoff: return 0.0;
    }
    return 0.0;
  }

  /// T̃0(iω) = ∫_0^∞ e^{-iωt} T0(t) dt. At ω = 0 this is the mean waiting
  /// time (infinite for Lévy-Smirnoff).
  Complex t0_at_iomega(double omega) const {
    const double a = dist_.alpha();
    const Complex i(0.0, 1.0);
    if (omega == 0.0) return mean_interval(dist_);
    switch (dist_.kind()) {
      case DistributionKind::Exponential: return 1.0 / (a + i * omega);
      case DistributionKind::Gamma:
        return detail::gamma_survival_laplace_numerator(a, *dist_.beta(), omega) / (i * omega);
      case DistributionKind::LevySmirnoff: {
        // (1 - e^{-sqrt(2ε/α)}) / ε at ε = iω.
        const Complex eps = i * omega;
        return -detail::expm1(-std::sqrt(2.0 * eps / a)) / eps;
      }
    }
    return 0.0;
  }

  /// L T̃0(iω): what the coherence at frequency ω is multiplied by at equilibrium.
  Complex multiplier(double omega) const {
    if (dist_.kind() == DistributionKind::LevySmirnoff) return 0.0;
    if (omega == 0.0) return 1.0;
    return L() * t0_at_iomega(omega);
  }

  const ResetDistribution& distribution() const noexcept { return dist_; }

 private:
  ResetDistribution dist_;
};

/// ρ_sr,eq = ρ_D + Σ_{n≠m} L T̃0(iω_nm) ρ_nm(0) |n⟩⟨m|.
inline DensityMatrix equilibrium_state(const DensityMatrix& rho0, const Spectrum& spec, const ResetDistribution& dist) {
  require_same_dim(rho0, spec, "equilibrium_state");
  const EquilibriumSpec eq(dist);
  ComplexMatrix out = rho0.matrix();
  for (Eigen::Index n = 0; n < spec.dim(); ++n) {
    for (Eigen::Index m = n + 1; m < spec.dim(); ++m) {
      const Complex v = eq.multiplier(spec.frequency(n, m)) * rho0(n, m);
      out(n, m) = v;
      out(m, n) = std::conj(v);
    }
  }
  return DensityMatrix::unchecked(std::move(out));
}

/// |C(α_nm, β)| = |(α_nm/(iβ)) [1 - (α_nm/(α_nm + i))^β]| with α_nm = α/|ω_nm|.
inline double coherence_factor(double alpha_nm, double beta) {
  if (!(alpha_nm > 0.0) || !(beta > 0.0)) throw DomainError("coherence_factor: need alpha_nm > 0 and beta > 0");
  // (α_nm/(α_nm+i))^β = (1 + i/α_nm)^{-β}
  const Complex numer = detail::gamma_survival_laplace_numerator(alpha_nm, beta, 1.0);
  return std::abs(alpha_nm / beta * numer);
}

/// Σ_n ρ_nn² + L² Σ_{n≠m} |T̃0(iω_nm)|² |ρ_nm|².
inline double equilibrium_purity(const DensityMatrix& rho0, const Spectrum& spec, const ResetDistribution& dist) {
  require_same_dim(rho0, spec, "equilibrium_purity");
  const EquilibriumSpec eq(dist);
  double p = 1.0 - population_linear_entropy(rho0);
  for (Eigen::Index n = 0; n < spec.dim(); ++n) {
    for (Eigen::Index m = 0; m < spec.dim(); ++m) {
      if (n != m) p += std::norm(eq.multiplier(spec.frequency(n, m))) * std::norm(rho0(n, m));
    }
  }
  return p;
}

/// Σ_{n≠m} |L T̃0(iω_nm)| |ρ_nm(0)|.
inline double equilibrium_coherence(const DensityMatrix& rho0, const Spectrum& spec, const ResetDistribution& dist) {
  require_same_dim(rho0, spec, "equilibrium_coherence");
  const EquilibriumSpec eq(dist);
  double c = 0.0;
  for (Eigen::Index n = 0; n < spec.dim(); ++n) {
    for (Eigen::Index m = 0; m < spec.dim(); ++m) {
      if (n != m) c += std::abs(eq.multiplier(spec.frequency(n, m))) * std::abs(rho0(n, m));
    }
  }
  return c;
}

/// Σ_n σ²_n[ρ] with σ²_n = ⟨n|ρ²|n⟩ - ⟨n|ρ|n⟩², equal to Σ_{n≠m} |ρ_nm|².
inline double population_variance_sum(const DensityMatrix& rho) {
  const ComplexMatrix sq = rho.matrix() * rho.matrix();
  double s = 0.0;
  for (Eigen::Index n = 0; n < rho.dim(); ++n) s += sq(n, n).real() - std::norm(rho(n, n));
  return s;
}

struct VarianceBoundCheck {
  double coherent_part;  // L² Σ_{n≠m} |T̃0(iω_nm)|² |ρ_nm(0)|²
  double bound;          // Σ_n σ²_n[ρ(0)]
  bool holds;
};

/// Checks 0 ≤ L² Σ |T̃0|² |ρ_nm(0)|² ≤ Σ_n σ²_n[ρ(0)].
inline VarianceBoundCheck equilibrium_variance_bound(const DensityMatrix& rho0, const Spectrum& spec,
                                                     const ResetDistribution& dist) {
  VarianceBoundCheck c{};
  c.coherent_part = equilibrium_purity(rho0, spec, dist) - (1.0 - population_linear_entropy(rho0));
  c.bound = population_variance_sum(rho0);
  c.holds = c.coherent_part >= -1e-12 && c.coherent_part <= c.bound + 1e-12;
  return c;
}

}  // namespace qreset

#endif  // QRESET_EQUILIBRIUM_HPP

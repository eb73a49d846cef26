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

#ifndef QRESET_OBSERVABLES_HPP
#define QRESET_OBSERVABLES_HPP

#include <algorithm>
#include <cassert>
#include <cmath>

#include "qreset/errors.hpp"
#include "qreset/spectral.hpp"

namespace qreset {

namespace detail {

inline void require_same_dim(const DensityMatrix& a, const DensityMatrix& b, const char* where) {
  if (a.dim() != b.dim()) {
    throw DimensionError(std::string(where) + ": dimensions " + std::to_string(a.dim()) + " and " +
                         std::to_string(b.dim()) + " differ");
  }
}

inline void require_square_match(const DensityMatrix& a, const ComplexMatrix& m, const char* where) {
  if (m.rows() != a.dim() || m.cols() != a.dim()) throw DimensionError(std::string(where) + ": factor matrix has wrong shape");
}

}  // namespace detail

/// ℓ1-norm of coherence: Σ_{n≠m} |ρ_nm|.
inline double coherence_l1(const DensityMatrix& rho) {
  double sum = 0.0;
  for (Eigen::Index n = 0; n < rho.dim(); ++n) {
    for (Eigen::Index m = 0; m < rho.dim(); ++m) {
      if (n != m) sum += std::abs(rho(n, m));
    }
  }
  return sum;
}

/// Tr ρ² = Σ |ρ_nm|² for Hermitian ρ.
inline double purity(const DensityMatrix& rho) { return rho.matrix().squaredNorm(); }

inline double linear_entropy(const DensityMatrix& rho) { return 1.0 - purity(rho); }

/// Linear entropy of the populations alone, 1 - Σ ρ_nn²: the largest
/// purity loss resetting can cause.
inline double population_linear_entropy(const DensityMatrix& rho) {
  double s = 0.0;
  for (Eigen::Index n = 0; n < rho.dim(); ++n) s += std::norm(rho(n, n));
  return 1.0 - s;
}

/// ΔP = P[ρ0] - P[ρ_sr].
inline double purity_loss(const DensityMatrix& rho0, const DensityMatrix& rho_sr) {
  detail::require_same_dim(rho0, rho_sr, "purity_loss");
  return purity(rho0) - purity(rho_sr);
}

/// ΔP from the dressing factors: Σ_{n≠m} |ρ_nm(0)|² (1 - |I_nm|²).
inline double purity_loss(const DensityMatrix& rho0, const ComplexMatrix& inm_values) {
  detail::require_square_match(rho0, inm_values, "purity_loss");
  double sum = 0.0;
  for (Eigen::Index n = 0; n < rho0.dim(); ++n) {
    for (Eigen::Index m = 0; m < rho0.dim(); ++m) {
      if (n != m) sum += std::norm(rho0(n, m)) * (1.0 - std::norm(inm_values(n, m)));
    }
  }
  return sum;
}

/// Tr(ab) / max(Tr a², Tr b²).
inline double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  detail::require_same_dim(a, b, "fidelity");
  // Tr(ab) = Σ a_nm b_mn = Σ a_nm conj(b_nm) for Hermitian b.
  const double overlap = a.matrix().cwiseProduct(b.matrix().conjugate()).sum().real();
  const double denom = std::max(purity(a), purity(b));
  assert(denom >= 1.0 / static_cast<double>(a.dim()) - 1e-12);
  return overlap / denom;
}

/// Δℱ = (1/P[ρ0]) Σ_{n≠m} |ρ_nm(0)|² (1 - Re f_nm).
///
/// With f = I this is 1 - ℱ[ρ_sr(t), ρ(t)]; with the dressed factors
/// e^{-iω t} I it is 1 - ℱ[ρ_sr(t), ρ(0)].
inline double fidelity_deviation(const DensityMatrix& rho0, const ComplexMatrix& factors) {
  detail::require_square_match(rho0, factors, "fidelity_deviation");
  double sum = 0.0;
  for (Eigen::Index n = 0; n < rho0.dim(); ++n) {
    for (Eigen::Index m = 0; m < rho0.dim(); ++m) {
      if (n != m) sum += std::norm(rho0(n, m)) * (1.0 - factors(n, m).real());
    }
  }
  return sum / purity(rho0);
}

struct ObservableRecord {
  double time;
  double coherence_l1;
  double purity;
  double linear_entropy;
  double fidelity_vs_unitary;
  double fidelity_vs_initial;
  double delta_p;
  double delta_f;
};

/// Observables of ρ_sr(t) against the unitary state ρ(t) and the initial ρ(0).
inline ObservableRecord make_observable_record(double time, const DensityMatrix& rho0, const DensityMatrix& rho_unitary,
                                               const DensityMatrix& rho_sr) {
  ObservableRecord r{};
  r.time = time;
  r.coherence_l1 = coherence_l1(rho_sr);
  r.purity = purity(rho_sr);
  r.linear_entropy = 1.0 - r.purity;
  r.fidelity_vs_unitary = fidelity(rho_sr, rho_unitary);
  r.fidelity_vs_initial = fidelity(rho_sr, rho0);
  r.delta_p = purity(rho0) - r.purity;
  r.delta_f = 1.0 - r.fidelity_vs_unitary;
  return r;
}

}  // namespace qreset

#endif  // QRESET_OBSERVABLES_HPP

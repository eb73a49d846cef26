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

#ifndef QRESET_SPECTRAL_HPP
#define QRESET_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qreset/errors.hpp"

namespace qreset {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Energies E_1 < E_2 < ... < E_d of a non-degenerate Hamiltonian (hbar = 1).
class Spectrum {
 public:
  explicit Spectrum(std::vector<double> energies) : energies_(std::move(energies)) {
    if (energies_.empty()) throw DomainError("Spectrum: no energies");
    for (std::size_t i = 0; i < energies_.size(); ++i) {
      if (!std::isfinite(energies_[i])) throw DomainError("Spectrum: non-finite energy");
      if (i > 0 && !(energies_[i] > energies_[i - 1])) {
        throw DomainError("Spectrum: energies must be strictly ascending (no degeneracies)");
      }
    }
  }

  Eigen::Index dim() const noexcept { return static_cast<Eigen::Index>(energies_.size()); }
  std::span<const double> energies() const noexcept { return energies_; }
  double energy(Eigen::Index n) const { return energies_.at(static_cast<std::size_t>(n)); }

  /// ω_nm = E_n - E_m.
  double frequency(Eigen::Index n, Eigen::Index m) const { return energy(n) - energy(m); }

 private:
  std::vector<double> energies_;
};

struct StateDiagnostics {
  double hermiticity_error;  // max |ρ_nm - conj(ρ_mn)|
  double trace_error;        // |Tr ρ - 1|
  double min_eigenvalue;
};

inline StateDiagnostics diagnose_state(const ComplexMatrix& m) {
  StateDiagnostics out{};
  out.hermiticity_error = (m - m.adjoint()).cwiseAbs().maxCoeff();
  out.trace_error = std::abs(m.trace() - Complex(1.0, 0.0));
  const ComplexMatrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = solver.eigenvalues().minCoeff();
  return out;
}

/// Density operator written in the energy eigenbasis.
///
/// The checked constructor enforces Hermiticity and unit trace to 1e-12 and
/// eigenvalues >= -1e-10. `unchecked` is for operations that preserve these
/// properties by construction.
class DensityMatrix {
 public:
  static constexpr double kHermiticityTolerance = 1e-12;
  static constexpr double kTraceTolerance = 1e-12;
  static constexpr double kEigenvalueFloor = -1e-10;

  explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
    if (m_.rows() == 0 || m_.rows() != m_.cols()) throw DimensionError("DensityMatrix: matrix must be square and non-empty");
    const auto diag = diagnose_state(m_);
    if (diag.hermiticity_error > kHermiticityTolerance) {
      throw InvariantError("hermiticity", "deviation " + std::to_string(diag.hermiticity_error));
    }
    if (diag.trace_error > kTraceTolerance) {
      throw InvariantError("trace", "deviation " + std::to_string(diag.trace_error));
    }
    if (diag.min_eigenvalue < kEigenvalueFloor) {
      throw InvariantError("positivity", "min eigenvalue " + std::to_string(diag.min_eigenvalue));
    }
  }

  static DensityMatrix unchecked(ComplexMatrix m) { return DensityMatrix(std::move(m), Unchecked{}); }

  Eigen::Index dim() const noexcept { return m_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  Complex operator()(Eigen::Index n, Eigen::Index m) const { return m_(n, m); }

 private:
  struct Unchecked {};
  DensityMatrix(ComplexMatrix m, Unchecked) : m_(std::move(m)) {}

  ComplexMatrix m_;
};

inline void require_same_dim(const DensityMatrix& rho, const Spectrum& spec, const char* where) {
  if (rho.dim() != spec.dim()) {
    throw DimensionError(std::string(where) + ": state dimension " + std::to_string(rho.dim()) +
                         " does not match spectrum dimension " + std::to_string(spec.dim()));
  }
}

/// ρ(t) = U(t) ρ(0) U†(t): element (n,m) acquires the phase e^{-iω_nm t}.
inline DensityMatrix unitary_evolve(const DensityMatrix& rho0, const Spectrum& spec, double t) {
  require_same_dim(rho0, spec, "unitary_evolve");
  ComplexMatrix out = rho0.matrix();
  const auto d = spec.dim();
  for (Eigen::Index n = 0; n < d; ++n) {
    for (Eigen::Index m = n + 1; m < d; ++m) {
      const Complex v = rho0(n, m) * std::polar(1.0, -spec.frequency(n, m) * t);
      out(n, m) = v;
      out(m, n) = std::conj(v);
    }
  }
  return DensityMatrix::unchecked(std::move(out));
}

/// ρ_D: populations kept, coherences removed.
inline DensityMatrix diagonal_part(const DensityMatrix& rho) {
  ComplexMatrix out = ComplexMatrix::Zero(rho.dim(), rho.dim());
  out.diagonal() = rho.matrix().diagonal();
  return DensityMatrix::unchecked(std::move(out));
}

enum class Normalization { Require, Normalize };

/// |ψ⟩⟨ψ| for ψ = Σ c_n |n⟩.
inline DensityMatrix pure_state(std::span<const Complex> coeffs, Normalization mode = Normalization::Require) {
  if (coeffs.empty()) throw DomainError("pure_state: empty coefficient list");
  Eigen::VectorXcd c(static_cast<Eigen::Index>(coeffs.size()));
  for (std::size_t i = 0; i < coeffs.size(); ++i) c(static_cast<Eigen::Index>(i)) = coeffs[i];
  const double norm = c.norm();
  if (norm == 0.0) throw DomainError("pure_state: zero vector");
  if (mode == Normalization::Normalize) {
    c /= norm;
  } else if (std::abs(norm * norm - 1.0) > 1e-12) {
    throw DomainError("pure_state: coefficients not normalized (|c|^2 = " + std::to_string(norm * norm) + ")");
  }
  ComplexMatrix m = c * c.adjoint();
  // Exact Hermiticity and real diagonal.
  for (Eigen::Index n = 0; n < m.rows(); ++n) {
    m(n, n) = Complex(std::norm(c(n)), 0.0);
    for (Eigen::Index k = n + 1; k < m.rows(); ++k) m(k, n) = std::conj(m(n, k));
  }
  return DensityMatrix::unchecked(std::move(m));
}

inline DensityMatrix pure_state(std::initializer_list<Complex> coeffs, Normalization mode = Normalization::Require) {
  return pure_state(std::span<const Complex>(coeffs.begin(), coeffs.size()), mode);
}

}  // namespace qreset

#endif  // QRESET_SPECTRAL_HPP

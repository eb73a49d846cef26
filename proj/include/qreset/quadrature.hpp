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

#ifndef QRESET_QUADRATURE_HPP
#define QRESET_QUADRATURE_HPP

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "qreset/errors.hpp"

namespace qreset {

/// Nodes in (0, 1) with weights for ∫_0^1 w(y) f(y) dy.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Jacobi rule for the weight y^left (1-y)^right on [0, 1],
/// left, right > -1, by the Golub-Welsch eigenvalue method.
inline QuadratureRule gauss_jacobi01(int n, double left, double right) {
  if (n < 1) throw DomainError("gauss_jacobi01: need at least one node");
  if (!(left > -1.0) || !(right > -1.0)) throw DomainError("gauss_jacobi01: exponents must exceed -1");
  // On [-1, 1] with weight (1-x)^a (1+x)^b: a belongs to y = 1, b to y = 0.
  const double a = right;
  const double b = left;
  const double ab = a + b;
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + ab;
    jac(k, k) = (k == 0) ? (b - a) / (ab + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    if (k + 1 < n) {
      const double m = k + 1.0;
      const double t = 2.0 * m + ab;
      const double beta = 4.0 * m * (m + a) * (m + b) * (m + ab) / (t * t * (t + 1.0) * (t - 1.0));
      jac(k, k + 1) = jac(k + 1, k) = std::sqrt(beta);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jac);
  // ∫_0^1 y^left (1-y)^right dy
  const double mu0 = std::exp(std::lgamma(left + 1.0) + std::lgamma(right + 1.0) - std::lgamma(left + right + 2.0));
  QuadratureRule rule;
  for (int k = 0; k < n; ++k) {
    const double v0 = solver.eigenvectors()(0, k);
    rule.nodes.push_back(0.5 * (solver.eigenvalues()(k) + 1.0));
    rule.weights.push_back(mu0 * v0 * v0);
  }
  return rule;
}

inline QuadratureRule gauss_legendre01(int n) { return gauss_jacobi01(n, 0.0, 0.0); }

}  // namespace qreset

#endif  // QRESET_QUADRATURE_HPP

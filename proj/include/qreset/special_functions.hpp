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

#ifndef QRESET_SPECIAL_FUNCTIONS_HPP
#define QRESET_SPECIAL_FUNCTIONS_HPP

#include <cmath>
#include <limits>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "qreset/errors.hpp"

/// Special functions used by the reset laws: incomplete gamma functions,
/// the two-parameter Mittag-Leffler function and the error function.
namespace qreset::special {

/// Upper incomplete gamma Γ(s, z) = ∫_z^∞ x^{s-1} e^{-x} dx.
inline double upper_incomplete_gamma(double s, double z) {
  if (!(s > 0.0) || z < 0.0) throw DomainError("upper_incomplete_gamma: need s > 0, z >= 0");
  return boost::math::tgamma(s, z);
}

/// Lower incomplete gamma γ(s, z) = ∫_0^z x^{s-1} e^{-x} dx.
inline double lower_incomplete_gamma(double s, double z) {
  if (!(s > 0.0) || z < 0.0) throw DomainError("lower_incomplete_gamma: need s > 0, z >= 0");
  return boost::math::tgamma_lower(s, z);
}

/// Γ(s, z)/Γ(s).
inline double regularized_upper_gamma(double s, double z) {
  if (!(s > 0.0) || z < 0.0) throw DomainError("regularized_upper_gamma: need s > 0, z >= 0");
  return boost::math::gamma_q(s, z);
}

inline double erf(double x) { return std::erf(x); }
inline double erfc(double x) { return std::erfc(x); }

/// 1/Γ(x), zero at the poles x = 0, -1, -2, ...
inline double reciprocal_gamma(double x) {
  if (x <= 0.0 && x == std::floor(x)) return 0.0;
  return 1.0 / boost::math::tgamma(x);
}

namespace detail {

// log E_{mu,nu}(z) for z > 0 by summing the series in log space. All terms
// are positive, so there is no cancellation.
inline double log_mittag_leffler_series(double mu, double nu, double z) {
  if (z == 0.0) return -std::lgamma(nu);
  const double log_z = std::log(z);
  double ref = -std::numeric_limits<double>::infinity();
  double scaled_sum = 0.0;
  double prev = -std::numeric_limits<double>::infinity();
  constexpr double kLogEps = -39.0;  // e^-39 ~ 1e-17
  for (long k = 0; k < 50'000'000; ++k) {
    const double log_term = static_cast<double>(k) * log_z - std::lgamma(mu * static_cast<double>(k) + nu);
    if (log_term > ref) {
      scaled_sum = scaled_sum * std::exp(ref - log_term) + 1.0;
      ref = log_term;
    } else {
      scaled_sum += std::exp(log_term - ref);
    }
    if (log_term < prev && log_term < ref + std::log(scaled_sum) + kLogEps) break;
    prev = log_term;
  }
  return ref + std::log(scaled_sum);
}

inline double mittag_leffler_series_nonneg(double mu, double nu, double z) {
  if (z == 0.0) return reciprocal_gamma(nu);
  return std::exp(log_mittag_leffler_series(mu, nu, z));
}

// Leading exponential plus algebraic tail; valid for real z >> 1, 0 < mu < 2.
inline double mittag_leffler_asymptotic(double mu, double nu, double z) {
  double value = std::pow(z, (1.0 - nu) / mu) * std::exp(std::pow(z, 1.0 / mu)) / mu;
  double zk = 1.0;
  for (int k = 1; k <= 10; ++k) {
    zk /= z;
    value -= zk * reciprocal_gamma(nu - mu * k);
  }
  return value;
}

// Alternating series for z < 0 carried out with 50 decimal digits.
inline double mittag_leffler_series_negative(double mu, double nu, double z) {
  using Big = boost::multiprecision::cpp_bin_float_50;
  const Big zb = z;
  Big sum = 0;
  Big power = 1;
  double max_log_term = -std::numeric_limits<double>::infinity();
  const double log_abs_z = std::log(-z);
  for (long k = 0; k < 100'000; ++k) {
    const double arg = mu * static_cast<double>(k) + nu;
    const double log_term = static_cast<double>(k) * log_abs_z - std::lgamma(arg);
    max_log_term = std::max(max_log_term, log_term);
    sum += power / boost::math::tgamma(Big(mu) * k + Big(nu));
    power *= zb;
    if (log_term < max_log_term - 95.0) break;  // |term| < 1e-41 of the largest
  }
  const double result = sum.convert_to<double>();
  if (!std::isfinite(result) || result == 0.0 || max_log_term - std::log(std::abs(result)) > 75.0) {
    throw DomainError("mittag_leffler: cancellation exceeds working precision for z < 0");
  }
  return result;
}

}  // namespace detail

/// Two-parameter Mittag-Leffler function E_{μ,ν}(z) = Σ_k z^k / Γ(μk + ν)
/// for real z and μ, ν > 0.
///
/// Non-negative arguments are summed in log space; for z > 50 and μ < 2 the
/// exponential asymptote with ten algebraic correction terms is used instead.
/// Negative arguments use a 50-digit series and throw DomainError when the
/// alternating cancellation would eat the precision (|z| large with small μ).
inline double mittag_leffler(double mu, double nu, double z) {
  if (!(mu > 0.0) || !(nu > 0.0)) throw DomainError("mittag_leffler: need mu > 0, nu > 0");
  if (z >= 0.0) {
    if (z > 50.0 && mu < 2.0) return detail::mittag_leffler_asymptotic(mu, nu, z);
    return detail::mittag_leffler_series_nonneg(mu, nu, z);
  }
  return detail::mittag_leffler_series_negative(mu, nu, z);
}

}  // namespace qreset::special

#endif  // QRESET_SPECIAL_FUNCTIONS_HPP

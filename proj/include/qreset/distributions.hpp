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

#ifndef QRESET_DISTRIBUTIONS_HPP
#define QRESET_DISTRIBUTIONS_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <string_view>

#include "qreset/errors.hpp"
#include "qreset/random.hpp"
#include "qreset/special_functions.hpp"

namespace qreset {

enum class DistributionKind { Exponential, Gamma, LevySmirnoff };

inline std::string_view to_string(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::Exponential: return "exponential";
    case DistributionKind::Gamma: return "gamma";
    case DistributionKind::LevySmirnoff: return "levy-smirnoff";
  }
  return "unknown";
}

/// Law of the waiting time between consecutive reset events.
///
/// `alpha` is the rate for the exponential and gamma laws and the inverse
/// mode scale for Lévy-Smirnoff (mode at 1/(3 alpha)). `beta` is the gamma
/// shape and is only present for the gamma law. Immutable.
class ResetDistribution {
 public:
  static ResetDistribution exponential(double alpha) {
    check_positive(alpha, "alpha");
    return ResetDistribution(DistributionKind::Exponential, alpha, std::nullopt);
  }
  static ResetDistribution gamma(double alpha, double beta) {
    check_positive(alpha, "alpha");
    check_positive(beta, "beta");
    return ResetDistribution(DistributionKind::Gamma, alpha, beta);
  }
  static ResetDistribution levy_smirnoff(double alpha) {
    check_positive(alpha, "alpha");
    return ResetDistribution(DistributionKind::LevySmirnoff, alpha, std::nullopt);
  }

  DistributionKind kind() const noexcept { return kind_; }
  double alpha() const noexcept { return alpha_; }
  std::optional<double> beta() const noexcept { return beta_; }

  /// Exponent of the small-ε Laplace expansion: 1 for exponential, beta for
  /// gamma, 1/2 for Lévy-Smirnoff.
  double shape() const noexcept {
    switch (kind_) {
      case DistributionKind::Exponential: return 1.0;
      case DistributionKind::Gamma: return *beta_;
      case DistributionKind::LevySmirnoff: return 0.5;
    }
    return 1.0;
  }

  friend bool operator==(const ResetDistribution&, const ResetDistribution&) = default;

 private:
  ResetDistribution(DistributionKind kind, double alpha, std::optional<double> beta)
      : kind_(kind), alpha_(alpha), beta_(beta) {}

  static void check_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string("ResetDistribution: ") + name + " must be positive");
  }

  DistributionKind kind_;
  double alpha_;
  std::optional<double> beta_;
};

/// Leading small-argument behaviour f(s) ~ coefficient * s^exponent.
struct PowerLawOnset {
  double exponent;
  double coefficient;
};

namespace detail {

inline void require_nonnegative_time(double t, const char* where) {
  if (!(t >= 0.0)) throw DomainError(std::string(where) + ": time must be non-negative");
}

// Gamma-law T(t) = α (αt)^{β-1} e^{-αt} E_{β,β}((αt)^β). For αt > 40 the
// e^{-αt}-weighted branch-cut part is below 1e-17 and only the poles
// s_k = α e^{2πik/β} on the principal sheet survive:
//   T(t) = Σ_k (s_k/β) exp((s_k - α) t).
inline double gamma_reset_density(double alpha, double beta, double t) {
  const double x = alpha * t;
  if (x <= 40.0) {
    const double log_ml = special::detail::log_mittag_leffler_series(beta, beta, std::exp(beta * std::log(x)));
    return alpha * std::exp((beta - 1.0) * std::log(x) - x + log_ml);
  }
  const bool integral_shape = beta == std::floor(beta);
  double sum = 0.0;
  for (long k = -static_cast<long>(std::ceil(beta)); k <= static_cast<long>(std::ceil(beta)); ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / beta;
    const bool on_sheet = integral_shape ? (k >= 0 && k < static_cast<long>(beta)) : std::abs(angle) < std::numbers::pi;
    if (!on_sheet) continue;
    const std::complex<double> pole = std::polar(alpha, angle);
    sum += std::real(pole / beta * std::exp((pole - alpha) * t));
  }
  return sum;
}

// Lévy-Smirnoff T(t) = Σ_n n (2παt³)^{-1/2} exp(-n²/(2αt)), the n-th term
// being the n-fold self-convolution of T1. Stops once past the peak term and
// the next term is below 1e-14 of the partial sum.
inline double levy_reset_density(double alpha, double t) {
  const double a = 2.0 * alpha * t;
  // Leading term underflows: so does everything else.
  if (1.0 / a > 700.0) return std::exp(-1.0 / a - 0.5 * std::log(std::numbers::pi * a) - std::log(t));
  const double prefactor = 1.0 / std::sqrt(std::numbers::pi * a * t * t);
  const double peak = std::sqrt(a / 2.0);
  const long cap = 10 + static_cast<long>(std::ceil(8.0 * std::sqrt(a)));
  double sum = 0.0;
  for (long n = 1; n <= cap; ++n) {
    const double dn = static_cast<double>(n);
    const double term = dn * std::exp(-dn * dn / a);
    if (dn > peak && term < 1e-14 * sum) break;
    sum += term;
  }
  return prefactor * sum;
}

}  // namespace detail

/// Waiting-time density T1(t).
///
/// At t = 0 the limit value is returned: 0 for Lévy-Smirnoff and gamma with
/// beta > 1, alpha for beta = 1, +inf for beta < 1.
inline double density_t1(const ResetDistribution& d, double t) {
  detail::require_nonnegative_time(t, "density_t1");
  const double a = d.alpha();
  switch (d.kind()) {
    case DistributionKind::Exponential:
      return a * std::exp(-a * t);
    case DistributionKind::Gamma: {
      const double b = *d.beta();
      if (t == 0.0) {
        if (b > 1.0) return 0.0;
        if (b == 1.0) return a;
        return std::numeric_limits<double>::infinity();
      }
      return std::exp(b * std::log(a) + (b - 1.0) * std::log(t) - a * t - std::lgamma(b));
    }
    case DistributionKind::LevySmirnoff:
      if (t == 0.0) return 0.0;
      return std::exp(-1.0 / (2.0 * a * t) - 0.5 * std::log(2.0 * std::numbers::pi * a) - 1.5 * std::log(t));
  }
  return 0.0;
}

/// Survival probability T0(t): no reset in an interval of length t.
inline double survival_t0(const ResetDistribution& d, double t) {
  detail::require_nonnegative_time(t, "survival_t0");
  const double a = d.alpha();
  switch (d.kind()) {
    case DistributionKind::Exponential: return std::exp(-a * t);
    case DistributionKind::Gamma: return special::regularized_upper_gamma(*d.beta(), a * t);
    case DistributionKind::LevySmirnoff:
      if (t == 0.0) return 1.0;
      return special::erf(1.0 / std::sqrt(2.0 * a * t));
  }
  return 0.0;
}

/// 1 - T0(t), evaluated without cancellation.
inline double reset_cdf(const ResetDistribution& d, double t) {
  detail::require_nonnegative_time(t, "reset_cdf");
  const double a = d.alpha();
  switch (d.kind()) {
    case DistributionKind::Exponential: return -std::expm1(-a * t);
    case DistributionKind::Gamma: return boost::math::gamma_p(*d.beta(), a * t);
    case DistributionKind::LevySmirnoff:
      if (t == 0.0) return 0.0;
      return special::erfc(1.0 / std::sqrt(2.0 * a * t));
  }
  return 0.0;
}

/// Reset-event density T(t) = Σ_n T_n(t), t > 0.
inline double reset_density_t(const ResetDistribution& d, double t) {
  if (!(t > 0.0)) throw DomainError("reset_density_t: time must be positive");
  switch (d.kind()) {
    case DistributionKind::Exponential: return d.alpha();
    case DistributionKind::Gamma: return detail::gamma_reset_density(d.alpha(), *d.beta(), t);
    case DistributionKind::LevySmirnoff: return detail::levy_reset_density(d.alpha(), t);
  }
  return 0.0;
}

/// lim_{t→0+} T(t); +inf for gamma with beta < 1.
inline double reset_density_at_origin(const ResetDistribution& d) {
  switch (d.kind()) {
    case DistributionKind::Exponential: return d.alpha();
    case DistributionKind::Gamma: {
      const double b = *d.beta();
      if (b > 1.0) return 0.0;
      if (b == 1.0) return d.alpha();
      return std::numeric_limits<double>::infinity();
    }
    case DistributionKind::LevySmirnoff: return 0.0;
  }
  return 0.0;
}

/// Mean waiting time; +inf for Lévy-Smirnoff.
inline double mean_interval(const ResetDistribution& d) {
  switch (d.kind()) {
    case DistributionKind::Exponential: return 1.0 / d.alpha();
    case DistributionKind::Gamma: return *d.beta() / d.alpha();
    case DistributionKind::LevySmirnoff: return std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

/// Small-s behaviour of T(s); empty when T vanishes faster than any power.
inline std::optional<PowerLawOnset> reset_density_onset(const ResetDistribution& d) {
  switch (d.kind()) {
    case DistributionKind::Exponential: return PowerLawOnset{0.0, d.alpha()};
    case DistributionKind::Gamma: {
      const double b = *d.beta();
      return PowerLawOnset{b - 1.0, std::exp(b * std::log(d.alpha()) - std::lgamma(b))};
    }
    case DistributionKind::LevySmirnoff: return std::nullopt;
  }
  return std::nullopt;
}

/// Small-u behaviour of 1 - T0(u); empty when it vanishes faster than any power.
inline std::optional<PowerLawOnset> survival_deficit_onset(const ResetDistribution& d) {
  switch (d.kind()) {
    case DistributionKind::Exponential: return PowerLawOnset{1.0, d.alpha()};
    case DistributionKind::Gamma: {
      const double b = *d.beta();
      return PowerLawOnset{b, std::exp(b * std::log(d.alpha()) - std::lgamma(b + 1.0))};
    }
    case DistributionKind::LevySmirnoff: return std::nullopt;
  }
  return std::nullopt;
}

/// Draws one waiting time from T1.
///
/// Exponential by inverse CDF, gamma by the Marsaglia-Tsang rejection scheme
/// of std::gamma_distribution (valid for all shapes), Lévy-Smirnoff via
/// t = 1/(alpha Z^2) with Z standard normal. Distribution objects are created
/// per call so that no state is carried between draws.
template <class Rng>
double sample_interval(const ResetDistribution& d, Rng& rng) {
  switch (d.kind()) {
    case DistributionKind::Exponential:
      return -std::log(uniform_open01(rng)) / d.alpha();
    case DistributionKind::Gamma:
      return std::gamma_distribution<double>(*d.beta(), 1.0 / d.alpha())(rng);
    case DistributionKind::LevySmirnoff: {
      const double z = std::normal_distribution<double>(0.0, 1.0)(rng);
      return 1.0 / (d.alpha() * z * z);
    }
  }
  return 0.0;
}

}  // namespace qreset

#endif  // QRESET_DISTRIBUTIONS_HPP

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

#ifndef QRESET_ERRORS_HPP
#define QRESET_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qreset {

/// Argument outside the mathematical domain of an operation (negative time,
/// zero frequency, non-unit axis, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Operands whose shapes do not fit together (state vs spectrum dimension,
/// trajectory length vs kernel grid).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical invariant failed after a computation. `invariant()` names the
/// property that was violated, e.g. "renewal normalization" or "positivity".
class InvariantError : public std::runtime_error {
 public:
  InvariantError(std::string invariant, const std::string& what)
      : std::runtime_error(invariant + ": " + what), invariant_(std::move(invariant)) {}

  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

/// Monte-Carlo run exceeded its reset budget.
class RunawayError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qreset

#endif  // QRESET_ERRORS_HPP

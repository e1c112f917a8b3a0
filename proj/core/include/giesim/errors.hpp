// Copyright 2026 The giesim Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gie {

enum class Errc {
  // configuration / usage
  Config,
  // physics domain: the inputs describe a regime the model does not cover
  NonPositiveInput,
  InvalidInput,
  EpsilonOutOfRange,
  DegenerateMeasurement,
  LogDomain,
  NotEntangled,
  // numerics
  NotPSD,
  ComplexBranch,
  SingularCovariance,
  StepSizeUnderflow,
  PositivityLost,
  NegativeVariance,
  NonDifferentiable,
};

enum class ErrorCategory { Config, PhysicsDomain, Numeric };

constexpr ErrorCategory category_of(Errc code) noexcept {
  switch (code) {
    case Errc::Config:
      return ErrorCategory::Config;
    case Errc::NonPositiveInput:
    case Errc::InvalidInput:
    case Errc::EpsilonOutOfRange:
    case Errc::DegenerateMeasurement:
    case Errc::LogDomain:
    case Errc::NotEntangled:
      return ErrorCategory::PhysicsDomain;
    default:
      return ErrorCategory::Numeric;
  }
}

/// Process exit code contract of the CLI: 2 config, 3 physics domain, 4 numeric.
constexpr int exit_code_of(Errc code) noexcept {
  switch (category_of(code)) {
    case ErrorCategory::Config:
      return 2;
    case ErrorCategory::PhysicsDomain:
      return 3;
    case ErrorCategory::Numeric:
      return 4;
  }
  return 1;
}

std::string_view errc_name(Errc code) noexcept;

/// Compact number rendering for error messages (%.6g).
std::string format_value(double x);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return category_of(code_); }

 private:
  Errc code_;
};

}  // namespace gie

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

#include "giesim/errors.hpp"

#include <cstdio>

namespace gie {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::Config: return "ConfigError";
    case Errc::NonPositiveInput: return "NonPositiveInput";
    case Errc::InvalidInput: return "InvalidInput";
    case Errc::EpsilonOutOfRange: return "EpsilonOutOfRange";
    case Errc::DegenerateMeasurement: return "DegenerateMeasurement";
    case Errc::LogDomain: return "LogDomain";
    case Errc::NotEntangled: return "NotEntangled";
    case Errc::NotPSD: return "NotPSD";
    case Errc::ComplexBranch: return "ComplexBranch";
    case Errc::SingularCovariance: return "SingularCovariance";
    case Errc::StepSizeUnderflow: return "StepSizeUnderflow";
    case Errc::PositivityLost: return "PositivityLost";
    case Errc::NegativeVariance: return "NegativeVariance";
    case Errc::NonDifferentiable: return "NonDifferentiable";
  }
  return "UnknownError";
}

std::string format_value(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace gie

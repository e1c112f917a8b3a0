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

#include <optional>

#include "giesim/covariance.hpp"
#include "giesim/physical_params.hpp"

namespace gie {

/// Effective rate sqrt(gamma_m^2 - 2 Omega^2 + 2 Omega sqrt(Omega^2 + n_bar lambda)).
double effective_rate(const DerivedParams& d, Mode mode);

/// Closed-form fixed point of the Riccati equation. Throws
/// DegenerateMeasurement when the measurement rate vanishes.
CovMat2 steady_covariance(const DerivedParams& d, Mode mode);

/// Hierarchy assumed by the analytic negativity. Each ratio must exceed
/// `kRegimeFactor` for the corresponding flag to be set.
struct ApproximationRegime {
  double noise_over_omega2;   ///< n_bar_+ lambda_+ / Omega_+^2
  double omega2_over_gamma2;  ///< Omega_+^2 / gamma_m^2
  double readout_over_nth;    ///< 4 g_+^2 / (kappa gamma_m n_th+)
  bool noise_dominant;
  bool underdamped;
  bool readout_dominant;
  bool n_th_at_least_one;
  bool valid() const {
    return noise_dominant && underdamped && readout_dominant && n_th_at_least_one;
  }
};

inline constexpr double kRegimeFactor = 10.0;

ApproximationRegime approximation_regime(const DerivedParams& d);

/// Bracket 1 - (kappa gamma_m / 16 g+^2)(Omega eps / (sqrt2 gamma_m) - 4 n_th+)
/// of the analytic steady-state negativity.
double analytic_negativity_bracket(const DerivedParams& d);

/// -1/2 log2(bracket). Negative values mean separable. Throws LogDomain when
/// the bracket is not positive.
double analytic_negativity(const DerivedParams& d);

struct Criterion {
  bool met;
  double margin;  ///< Omega eps / (4 sqrt2 gamma_m n_th+)
};

Criterion entanglement_criterion(const DerivedParams& d);

/// pi / (Omega eps): entangling time of two free gravitating oscillators.
double t_entangle(const DerivedParams& d);

struct SteadyReport {
  CovMat2 v_plus;
  CovMat2 v_minus;
  double gamma_plus;
  double gamma_minus;
  /// Full-pipeline negativity of the steady covariances.
  LogNegativity en;
  /// Analytic approximation; empty optional means the bracket left its domain.
  std::optional<double> en_analytic;
  bool criterion_met;
  double criterion_margin;
  std::optional<double> t_en;  ///< empty for eps = 0
  ApproximationRegime regime;
};

SteadyReport steady_report(const DerivedParams& d);

}  // namespace gie

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
#include <string>
#include <vector>

#include "giesim/metrology.hpp"
#include "giesim/physical_params.hpp"
#include "giesim/riccati.hpp"
#include "giesim/steady_state.hpp"

namespace gie {

struct SweepAxis {
  std::string name;  ///< a config key, e.g. "kappa_over_2pi_Hz"
  std::vector<double> values;

  /// `num` values log-spaced between start and stop inclusive.
  static SweepAxis logspace(std::string name, double start, double stop, std::size_t num);
};

enum class Pipeline { steady_only, full_evolution };

struct SweepSpec {
  ExperimentParams base = ExperimentParams::reference();
  PhysicalConstants consts;
  std::vector<SweepAxis> axes;  ///< one or two; the first axis varies slowest
  Pipeline pipeline = Pipeline::steady_only;
  IntegratorConfig integrator;
  double target_snr = 1.0;
  double t_meas_factor = 1.0;
  MomentConvention moments = MomentConvention::symmetric;
  unsigned workers = 1;
};

/// Relative distance from the closed-form steady state below which a
/// trajectory counts as settled.
inline constexpr double kSettleTolerance = 1e-4;

struct TrajectorySummary {
  /// First sampled time with raw E_N > 0, and the sample before it.
  std::optional<double> onset_time;
  std::optional<double> onset_after;
  double en_final = 0.0;
  /// Earliest sample after which both modes stay within kSettleTolerance of
  /// the closed-form steady state.
  std::optional<double> settle_time;
  bool converged = false;
  std::optional<double> converged_at;
  std::size_t uncertainty_violations = 0;
};

struct SweepRow {
  std::size_t index = 0;
  std::vector<double> axis_values;
  bool ok = false;
  std::string error;
  std::optional<SteadyReport> steady;
  std::optional<TrajectorySummary> trajectory;
  std::optional<SnrBudget> budget;  ///< empty when the steady state is separable
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;  ///< Cartesian order of the axes
};

/// Throws Config for malformed specs; per-point failures become failed rows.
void validate(const SweepSpec& spec);

SweepResult run_sweep(const SweepSpec& spec);

/// Runs one point of the pipeline, never throwing.
SweepRow run_point(const SweepSpec& spec, const std::vector<double>& axis_values);

TrajectorySummary summarize(const Trajectory& traj, const DerivedParams& d);

std::optional<double> settle_time(const Trajectory& traj, const CovMat2& steady_plus,
                                  const CovMat2& steady_minus,
                                  double tolerance = kSettleTolerance);

}  // namespace gie

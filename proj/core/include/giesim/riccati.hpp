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

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "giesim/covariance.hpp"
#include "giesim/physical_params.hpp"

namespace gie {

/// Linear-Gaussian model of one mechanical mode under continuous position
/// readout: dr = A r dt + force noise, output C r + shot noise.
struct ModeSystem {
  Mode mode;
  Eigen::Matrix2d a;      ///< drift [[0, Omega], [-Omega, -gamma_m]]
  Eigen::RowVector2d c;   ///< readout (4 g / sqrt(kappa), 0)
  Eigen::Matrix2d n;      ///< diag(0, n_bar)
};

ModeSystem build_system(const DerivedParams& d, Mode mode);

/// Both modes start in the same thermal state (n_bar_+ / 2 gamma_m) I.
std::pair<CovMat2, CovMat2> initial_covariance(const DerivedParams& d);

/// A V + V A^T + N - V C^T C V.
CovMat2 riccati_rhs(const CovMat2& v, const ModeSystem& sys);
Eigen::Matrix2d riccati_rhs(const Eigen::Matrix2d& v, const ModeSystem& sys);

struct IntegratorConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  double t_end = 2000.0;
  double max_step = 50.0;
  /// Sample times, strictly increasing within [0, t_end]. Empty means the
  /// default grid (see default_output_grid).
  std::vector<double> output_grid;
  /// Converged once ||rhs||_F < converge_tol * ||V||_F (units 1/s) holds for
  /// `converge_streak` consecutive accepted steps.
  double converge_tol = 1e-6;
  int converge_streak = 10;
  bool stop_when_converged = false;
  std::size_t max_steps = 5'000'000;
};

/// t = 0 followed by `points` log-spaced samples in [t_min, t_end]
/// (just {0, t_end} when t_end <= t_min, {0} when t_end == 0).
std::vector<double> default_output_grid(double t_end, std::size_t points = 400,
                                        double t_min = 1e-2);

/// det V below this counts as an uncertainty-relation violation.
inline constexpr double kUncertaintyTolerance = 1e-9;

struct IntegratorStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evaluations = 0;
};

struct ModeTrajectory {
  Mode mode;
  std::vector<double> t;
  std::vector<CovMat2> v;
  bool converged = false;
  std::optional<double> converged_at;
  /// Samples with det V < 1 - kUncertaintyTolerance.
  std::size_t uncertainty_violations = 0;
  double min_det = 0.0;
  IntegratorStats stats;
};

/// Adaptive Dormand-Prince integration of the Riccati equation, landing
/// exactly on every output time. Throws StepSizeUnderflow or PositivityLost.
ModeTrajectory evolve(const ModeSystem& sys, const CovMat2& v0, const IntegratorConfig& cfg);

struct TrajectorySample {
  double t;
  CovMat2 plus;
  CovMat2 minus;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  bool converged = false;  ///< both modes
  std::optional<double> converged_at;
  std::size_t uncertainty_violations = 0;
  double min_det = 0.0;
};

/// Evolves both modes (concurrently) from initial_covariance(d) and merges
/// them onto a shared, time-ordered grid.
Trajectory evolve_modes(const DerivedParams& d, IntegratorConfig cfg);

/// Raw and clamped negativity at every sample.
std::vector<LogNegativity> negativity_series(const Trajectory& traj, double epsilon);

enum class Regime { early, intermediate };

/// Closed-form attractor approximations: early (t < ~10 s) and
/// intermediate (30 s < t < 300 s) at the reference parameters.
CovMat2 regime_approximation(double t, const DerivedParams& d, Mode mode, Regime regime);

}  // namespace gie

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

#include <array>
#include <cstddef>
#include <cstdint>

#include "giesim/covariance.hpp"
#include "giesim/physical_params.hpp"

namespace gie {

struct ModeGradient {
  double qq = 0.0;
  double qp = 0.0;
  double pp = 0.0;
};

/// Partial derivatives of the raw negativity with respect to the six
/// independent mode-covariance entries.
struct NegativityGradient {
  ModeGradient plus;
  ModeGradient minus;
};

/// Raw negativity of the state built from the two mode covariances.
double pipeline_negativity(const CovMat2& vplus, const CovMat2& vminus, double epsilon);

/// Central finite differences, relative step 1e-6. Throws NonDifferentiable
/// at the square-root kink sigma^2 = 4 det V.
NegativityGradient negativity_gradient(const CovMat2& vplus, const CovMat2& vminus,
                                       double epsilon);

/// Same derivatives by the chain rule through sigma and det V.
NegativityGradient negativity_gradient_chain_rule(const CovMat2& vplus, const CovMat2& vminus,
                                                  double epsilon);

/// How the fourth moment <dV_pp^2> is taken.
enum class MomentConvention {
  symmetric,     ///< 2 V_pp^2, what Gaussian statistics give
  strict_paper,  ///< 2 V_pp, kept for comparison (not dimensionally homogeneous)
};

/// Second moments of the single-sample fluctuations dV_ij = x_i x_j - V_ij
/// for Gaussian (q, p).
struct MomentMatrix {
  double qq_qq;
  double qp_qp;
  double pp_pp;
  double qq_qp;
  double qq_pp;
  double pp_qp;
};

MomentMatrix covariance_moment_matrix(const CovMat2& v,
                                      MomentConvention convention = MomentConvention::symmetric);

/// <dE_N^2>: the six-term quadratic form per mode with coefficients
/// 2, 1, 2, 4, 4, 4. Throws NegativeVariance below -1e-12; tiny negatives
/// are clamped to 0.
double variance_en(const NegativityGradient& grad, const CovMat2& vplus, const CovMat2& vminus,
                   MomentConvention convention = MomentConvention::symmetric);

struct SnrBudget {
  double en;
  double var_en;
  double target_snr;
  double n_meas_exact;  ///< target^2 var / en^2 before rounding
  std::uint64_t n_meas;
  double t_meas;  ///< seconds per repetition
  double tau;     ///< n_meas * t_meas
};

/// t_meas = t_meas_factor * kappa / g+^2. Throws NotEntangled for en <= 0.
SnrBudget snr_budget(const DerivedParams& d, double en, double var_en, double target_snr,
                     double t_meas_factor = 1.0);

/// kappa G rho / (8 sqrt2 g+^2 Omega), valid for Omega eps >> 4 sqrt2 gamma_m n_th+.
double en_smallcoupling(const DerivedParams& d);

struct BudgetReport {
  CovMat2 v_plus;
  CovMat2 v_minus;
  NegativityGradient gradient;
  SnrBudget budget;
  double criterion_margin;
};

/// Steady covariances -> negativity -> gradient -> variance -> budget.
BudgetReport budget_at_steady_state(const DerivedParams& d, double target_snr,
                                    MomentConvention convention = MomentConvention::symmetric,
                                    double t_meas_factor = 1.0);

/// Monte-Carlo estimate of the moment matrix with standard errors. Samples
/// are split into fixed chunks with independent seeded streams, so the result
/// depends only on (seed, samples), not on `workers`.
struct MomentEstimate {
  MomentMatrix mean;
  MomentMatrix std_error;
};

MomentEstimate sample_moments(const CovMat2& v, std::size_t samples, std::uint64_t seed,
                              unsigned workers = 1);

}  // namespace gie

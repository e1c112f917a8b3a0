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

#include <Eigen/Core>

namespace gie {

// Conventions: quadratures satisfy [q, p] = 2i, so the vacuum covariance is
// the identity and a state is physical when det V >= 1 (single mode).

/// Symmetric 2x2 covariance of one mechanical mode.
struct CovMat2 {
  double qq = 0.0;
  double qp = 0.0;
  double pp = 0.0;

  static CovMat2 identity() { return {1.0, 0.0, 1.0}; }
  static CovMat2 scalar(double s) { return {s, 0.0, s}; }
  static CovMat2 from_matrix(const Eigen::Matrix2d& m) {
    return {m(0, 0), 0.5 * (m(0, 1) + m(1, 0)), m(1, 1)};
  }

  Eigen::Matrix2d matrix() const {
    Eigen::Matrix2d m;
    m << qq, qp, qp, pp;
    return m;
  }

  double det() const { return qq * pp - qp * qp; }
  double trace() const { return qq + pp; }
  double min_eigenvalue() const;
  double max_eigenvalue() const;
  /// Positive semidefinite within an absolute tolerance on the eigenvalues.
  bool is_psd(double tol = 0.0) const { return min_eigenvalue() >= -tol; }

  CovMat2 scaled(double c) const { return {c * qq, c * qp, c * pp}; }

  bool operator==(const CovMat2&) const = default;
};

/// Individual-mirror covariance, blocks ordered (q_A, p_A, q_B, p_B).
struct CovMat4 {
  CovMat2 a;
  CovMat2 b;
  Eigen::Matrix2d ab = Eigen::Matrix2d::Zero();

  Eigen::Matrix4d matrix() const;
  static CovMat4 from_matrix(const Eigen::Matrix4d& m);
};

/// Symplectic form with 2x2 blocks [[0, 1], [-1, 0]].
Eigen::Matrix4d symplectic_form();

/// Half beam splitter taking (q+, p+, q-, p-) to (q_A, p_A, q_B, p_B). The
/// differential quadratures are rescaled by (1 - eps)^(-+1/4) because the
/// mode frequencies differ.
struct BeamSplitterMap {
  Eigen::Matrix4d s;
  double epsilon;
};

BeamSplitterMap beam_splitter(double epsilon);

/// V = S blockdiag(V+, V-) S^T. Throws NotPSD when an input is not PSD.
CovMat4 combine(const CovMat2& vplus, const CovMat2& vminus, const BeamSplitterMap& map);

struct LogNegativity {
  double raw;      ///< may be negative (separable)
  double clamped;  ///< max(raw, 0)
  bool entangled() const { return raw > 0.0; }
};

/// Invariant sigma = det A + det B - 2 det C entering the negativity.
double negativity_sigma(const CovMat4& v);

/// Closed-form logarithmic negativity of a two-mode Gaussian state. Throws
/// ComplexBranch when sigma^2 - 4 det V is negative beyond rounding.
LogNegativity log_negativity(const CovMat4& v);

/// 1 / sqrt(det V). Throws SingularCovariance for det V <= 0.
double purity(const CovMat2& v);

struct SqueezingDiagnostics {
  double angle;      ///< minor principal axis from the q axis, in (-pi/2, pi/2]
  double eig_ratio;  ///< lambda_min / lambda_max
};

/// Degenerate (isotropic) input gives angle 0, ratio 1.
SqueezingDiagnostics squeezing_diagnostics(const CovMat2& v);

}  // namespace gie

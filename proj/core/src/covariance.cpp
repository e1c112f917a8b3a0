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

#include "giesim/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/LU>

#include "giesim/errors.hpp"

namespace gie {

namespace {

double psd_tolerance(const CovMat2& v) {
  return 1e-12 * std::max(1.0, std::abs(v.qq) + std::abs(v.pp));
}

double det2(const Eigen::Matrix2d& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

}  // namespace

double CovMat2::min_eigenvalue() const {
  return 0.5 * (qq + pp) - std::hypot(0.5 * (qq - pp), qp);
}

double CovMat2::max_eigenvalue() const {
  return 0.5 * (qq + pp) + std::hypot(0.5 * (qq - pp), qp);
}

Eigen::Matrix4d CovMat4::matrix() const {
  Eigen::Matrix4d m;
  m.topLeftCorner<2, 2>() = a.matrix();
  m.bottomRightCorner<2, 2>() = b.matrix();
  m.topRightCorner<2, 2>() = ab;
  m.bottomLeftCorner<2, 2>() = ab.transpose();
  return m;
}

CovMat4 CovMat4::from_matrix(const Eigen::Matrix4d& m) {
  const Eigen::Matrix4d sym = 0.5 * (m + m.transpose());
  CovMat4 out;
  out.a = CovMat2::from_matrix(sym.topLeftCorner<2, 2>());
  out.b = CovMat2::from_matrix(sym.bottomRightCorner<2, 2>());
  out.ab = sym.topRightCorner<2, 2>();
  return out;
}

Eigen::Matrix4d symplectic_form() {
  Eigen::Matrix4d j = Eigen::Matrix4d::Zero();
  j(0, 1) = 1.0;
  j(1, 0) = -1.0;
  j(2, 3) = 1.0;
  j(3, 2) = -1.0;
  return j;
}

BeamSplitterMap beam_splitter(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw Error(Errc::EpsilonOutOfRange, "beam splitter needs 0 <= epsilon < 1, got " +
                                             format_value(epsilon));
  }
  const double s = std::pow(1.0 - epsilon, 0.25);
  const double h = 1.0 / std::numbers::sqrt2;
  BeamSplitterMap map;
  map.epsilon = epsilon;
  map.s << h, 0.0, h / s, 0.0,
           0.0, h, 0.0, h * s,
           h, 0.0, -h / s, 0.0,
           0.0, h, 0.0, -h * s;
  return map;
}

CovMat4 combine(const CovMat2& vplus, const CovMat2& vminus, const BeamSplitterMap& map) {
  if (!vplus.is_psd(psd_tolerance(vplus)) || !vminus.is_psd(psd_tolerance(vminus))) {
    throw Error(Errc::NotPSD, "mode covariance is not positive semidefinite");
  }
  Eigen::Matrix4d modes = Eigen::Matrix4d::Zero();
  modes.topLeftCorner<2, 2>() = vplus.matrix();
  modes.bottomRightCorner<2, 2>() = vminus.matrix();
  return CovMat4::from_matrix(map.s * modes * map.s.transpose());
}

double negativity_sigma(const CovMat4& v) {
  return v.a.det() + v.b.det() - 2.0 * det2(v.ab);
}

LogNegativity log_negativity(const CovMat4& v) {
  const double sigma = negativity_sigma(v);
  const double det = v.matrix().determinant();
  double disc = sigma * sigma - 4.0 * det;
  if (disc < 0.0) {
    if (disc < -1e-10 * sigma * sigma) {
      throw Error(Errc::ComplexBranch,
                  "sigma^2 - 4 det V = " + format_value(disc) + " < 0, covariance is unphysical");
    }
    disc = 0.0;
  }
  // nu_-^2 = (sigma - sqrt(disc)) / 2, written without the cancellation.
  const double denom = sigma + std::sqrt(disc);
  if (!(det > 0.0) || !(denom > 0.0)) {
    throw Error(Errc::ComplexBranch, "covariance has no positive symplectic spectrum");
  }
  const double nu_minus_sq = 2.0 * det / denom;
  const double raw = -0.5 * std::log2(nu_minus_sq);
  return {raw, std::max(raw, 0.0)};
}

double purity(const CovMat2& v) {
  const double det = v.det();
  if (!(det > 0.0)) {
    throw Error(Errc::SingularCovariance, "purity undefined for det V = " + format_value(det));
  }
  return 1.0 / std::sqrt(det);
}

SqueezingDiagnostics squeezing_diagnostics(const CovMat2& v) {
  const double half_gap = std::hypot(0.5 * (v.qq - v.pp), v.qp);
  const double mean = 0.5 * (v.qq + v.pp);
  if (half_gap <= 1e-15 * std::abs(mean)) {
    return {0.0, 1.0};
  }
  // Major axis at 0.5 atan2(2 qp, qq - pp); the squeezed axis is orthogonal.
  double angle = 0.5 * std::atan2(2.0 * v.qp, v.qq - v.pp) + 0.5 * std::numbers::pi;
  if (angle > 0.5 * std::numbers::pi) angle -= std::numbers::pi;
  const double lo = mean - half_gap;
  const double hi = mean + half_gap;
  return {angle, lo / hi};
}

}  // namespace gie

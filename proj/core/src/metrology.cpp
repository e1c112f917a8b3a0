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

#include "giesim/metrology.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/LU>

#include "giesim/errors.hpp"
#include "giesim/steady_state.hpp"

namespace gie {

namespace {

using Params6 = std::array<double, 6>;

Params6 pack(const CovMat2& p, const CovMat2& m) { return {p.qq, p.qp, p.pp, m.qq, m.qp, m.pp}; }

NegativityGradient unpack(const Params6& g) {
  return {{g[0], g[1], g[2]}, {g[3], g[4], g[5]}};
}

// Distance from the sigma^2 = 4 det V kink, relative to sigma^2.
void require_differentiable(const CovMat4& v) {
  const double sigma = negativity_sigma(v);
  const double disc = sigma * sigma - 4.0 * v.matrix().determinant();
  if (!(disc > 1e-12 * sigma * sigma)) {
    throw Error(Errc::NonDifferentiable,
                "negativity has a square-root kink here (symplectic eigenvalues coincide)");
  }
}

Eigen::Matrix2d adjugate(const Eigen::Matrix2d& m) {
  Eigen::Matrix2d a;
  a << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return a;
}

}  // namespace

double pipeline_negativity(const CovMat2& vplus, const CovMat2& vminus, double epsilon) {
  return log_negativity(combine(vplus, vminus, beam_splitter(epsilon))).raw;
}

NegativityGradient negativity_gradient(const CovMat2& vplus, const CovMat2& vminus,
                                       double epsilon) {
  const BeamSplitterMap map = beam_splitter(epsilon);
  require_differentiable(combine(vplus, vminus, map));

  const Params6 x0 = pack(vplus, vminus);
  const double scale_plus = std::sqrt(std::abs(vplus.qq * vplus.pp));
  const double scale_minus = std::sqrt(std::abs(vminus.qq * vminus.pp));
  const auto eval = [&](const Params6& x) {
    return log_negativity(combine({x[0], x[1], x[2]}, {x[3], x[4], x[5]}, map)).raw;
  };

  Params6 grad{};
  for (std::size_t k = 0; k < 6; ++k) {
    const double scale = k < 3 ? scale_plus : scale_minus;
    const double h = 1e-6 * std::max(std::abs(x0[k]), scale);
    Params6 up = x0;
    Params6 down = x0;
    up[k] += h;
    down[k] -= h;
    grad[k] = (eval(up) - eval(down)) / (up[k] - down[k]);
  }
  return unpack(grad);
}

NegativityGradient negativity_gradient_chain_rule(const CovMat2& vplus, const CovMat2& vminus,
                                                  double epsilon) {
  const BeamSplitterMap map = beam_splitter(epsilon);
  const CovMat4 v = combine(vplus, vminus, map);
  require_differentiable(v);

  const double det_plus = vplus.det();
  const double det_minus = vminus.det();
  const double det = det_plus * det_minus;  // det S = 1
  const double sigma = negativity_sigma(v);
  const double root = std::sqrt(sigma * sigma - 4.0 * det);
  const double nu_sq = 0.5 * (sigma - root);

  const Eigen::Matrix2d adj_a = adjugate(v.a.matrix());
  const Eigen::Matrix2d adj_b = adjugate(v.b.matrix());
  const Eigen::Matrix2d adj_ab = adjugate(v.ab);

  const Params6 d_det{vplus.pp * det_minus, -2.0 * vplus.qp * det_minus,
                      vplus.qq * det_minus, vminus.pp * det_plus,
                      -2.0 * vminus.qp * det_plus, vminus.qq * det_plus};

  Params6 grad{};
  for (std::size_t k = 0; k < 6; ++k) {
    const int base = k < 3 ? 0 : 2;
    Eigen::Matrix4d dmodes = Eigen::Matrix4d::Zero();
    switch (k % 3) {
      case 0: dmodes(base, base) = 1.0; break;
      case 1: dmodes(base, base + 1) = dmodes(base + 1, base) = 1.0; break;
      default: dmodes(base + 1, base + 1) = 1.0; break;
    }
    const Eigen::Matrix4d dv = map.s * dmodes * map.s.transpose();
    const double d_sigma = (adj_a * dv.topLeftCorner<2, 2>()).trace() +
                           (adj_b * dv.bottomRightCorner<2, 2>()).trace() -
                           2.0 * (adj_ab * dv.topRightCorner<2, 2>()).trace();
    const double d_nu_sq = 0.5 * (d_sigma - (sigma * d_sigma - 2.0 * d_det[k]) / root);
    grad[k] = -d_nu_sq / (2.0 * std::numbers::ln2 * nu_sq);
  }
  return unpack(grad);
}

MomentMatrix covariance_moment_matrix(const CovMat2& v, MomentConvention convention) {
  MomentMatrix m{};
  m.qq_qq = 2.0 * v.qq * v.qq;
  m.qp_qp = v.qq * v.pp + v.qp * v.qp;
  m.pp_pp = convention == MomentConvention::strict_paper ? 2.0 * v.pp : 2.0 * v.pp * v.pp;
  m.qq_qp = 2.0 * v.qq * v.qp;
  m.qq_pp = 2.0 * v.qp * v.qp;
  // Not in the printed list; follows from Isserlis' theorem like qq_qp.
  m.pp_qp = 2.0 * v.pp * v.qp;
  return m;
}

double variance_en(const NegativityGradient& grad, const CovMat2& vplus, const CovMat2& vminus,
                   MomentConvention convention) {
  const auto mode_term = [&](const ModeGradient& g, const CovMat2& v) {
    const MomentMatrix m = covariance_moment_matrix(v, convention);
    return g.qq * g.qq * m.qq_qq + g.qp * g.qp * m.qp_qp + g.pp * g.pp * m.pp_pp +
           2.0 * g.qq * g.pp * m.qq_pp + 2.0 * g.qq * g.qp * m.qq_qp +
           2.0 * g.pp * g.qp * m.pp_qp;
  };
  const double var = mode_term(grad.plus, vplus) + mode_term(grad.minus, vminus);
  if (var < -1e-12) {
    throw Error(Errc::NegativeVariance, "<dE_N^2> = " + format_value(var));
  }
  return std::max(var, 0.0);
}

SnrBudget snr_budget(const DerivedParams& d, double en, double var_en, double target_snr,
                     double t_meas_factor) {
  if (!(en > 0.0)) {
    throw Error(Errc::NotEntangled, "E_N = " + format_value(en) + " <= 0");
  }
  if (!(target_snr >= 0.0) || !(var_en >= 0.0) || !(t_meas_factor > 0.0)) {
    throw Error(Errc::InvalidInput, "budget needs target_snr >= 0, var >= 0, factor > 0");
  }
  SnrBudget b{};
  b.en = en;
  b.var_en = var_en;
  b.target_snr = target_snr;
  b.n_meas_exact = target_snr * target_snr * var_en / (en * en);
  b.n_meas = static_cast<std::uint64_t>(std::ceil(b.n_meas_exact));
  b.t_meas = t_meas_factor * d.params.kappa / (d.g_plus * d.g_plus);
  b.tau = static_cast<double>(b.n_meas) * b.t_meas;
  return b;
}

double en_smallcoupling(const DerivedParams& d) {
  return d.params.kappa * d.consts.G * d.params.rho /
         (8.0 * std::numbers::sqrt2 * d.g_plus * d.g_plus * d.params.Omega);
}

BudgetReport budget_at_steady_state(const DerivedParams& d, double target_snr,
                                    MomentConvention convention, double t_meas_factor) {
  BudgetReport r{};
  r.v_plus = steady_covariance(d, Mode::plus);
  r.v_minus = steady_covariance(d, Mode::minus);
  r.criterion_margin = entanglement_criterion(d).margin;
  const double en = pipeline_negativity(r.v_plus, r.v_minus, d.epsilon);
  if (!(en > 0.0)) {
    throw Error(Errc::NotEntangled, "steady-state E_N = " + format_value(en) +
                                        " <= 0 (criterion margin " +
                                        format_value(r.criterion_margin) + ")");
  }
  r.gradient = negativity_gradient(r.v_plus, r.v_minus, d.epsilon);
  const double var = variance_en(r.gradient, r.v_plus, r.v_minus, convention);
  r.budget = snr_budget(d, en, var, target_snr, t_meas_factor);
  return r;
}

MomentEstimate sample_moments(const CovMat2& v, std::size_t samples, std::uint64_t seed,
                              unsigned workers) {
  if (samples < 2) throw Error(Errc::InvalidInput, "need at least two samples");
  if (!(v.qq > 0.0) || !(v.det() >= 0.0)) throw Error(Errc::NotPSD, "cannot sample from V");

  constexpr std::size_t kChunks = 64;
  struct Sums {
    std::array<double, 6> sum{};
    std::array<double, 6> sum_sq{};
  };
  std::vector<Sums> partial(kChunks);

  const double a = std::sqrt(v.qq);
  const double b = v.qp / a;
  const double c = std::sqrt(std::max(v.det(), 0.0) / v.qq);

  const auto run_chunk = [&](std::size_t chunk) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(chunk)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal;
    const std::size_t begin = chunk * samples / kChunks;
    const std::size_t end = (chunk + 1) * samples / kChunks;
    Sums s;
    for (std::size_t i = begin; i < end; ++i) {
      const double z1 = normal(rng);
      const double z2 = normal(rng);
      const double q = a * z1;
      const double p = b * z1 + c * z2;
      const double dqq = q * q - v.qq;
      const double dqp = q * p - v.qp;
      const double dpp = p * p - v.pp;
      const std::array<double, 6> x{dqq * dqq, dqp * dqp, dpp * dpp,
                                    dqq * dqp, dqq * dpp, dpp * dqp};
      for (std::size_t k = 0; k < 6; ++k) {
        s.sum[k] += x[k];
        s.sum_sq[k] += x[k] * x[k];
      }
    }
    partial[chunk] = s;
  };

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t chunk = next++; chunk < kChunks; chunk = next++) run_chunk(chunk);
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < std::max(1u, workers); ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  Sums total;
  for (const Sums& s : partial) {
    for (std::size_t k = 0; k < 6; ++k) {
      total.sum[k] += s.sum[k];
      total.sum_sq[k] += s.sum_sq[k];
    }
  }
  const double n = static_cast<double>(samples);
  std::array<double, 6> mean{};
  std::array<double, 6> se{};
  for (std::size_t k = 0; k < 6; ++k) {
    mean[k] = total.sum[k] / n;
    const double var = std::max(0.0, (total.sum_sq[k] / n - mean[k] * mean[k]) * n / (n - 1.0));
    se[k] = std::sqrt(var / n);
  }
  const auto to_matrix = [](const std::array<double, 6>& x) {
    return MomentMatrix{x[0], x[1], x[2], x[3], x[4], x[5]};
  };
  return {to_matrix(mean), to_matrix(se)};
}

}  // namespace gie

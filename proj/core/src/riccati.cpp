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

#include "giesim/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>

#include "giesim/dopri5.hpp"
#include "giesim/errors.hpp"

namespace gie {

ModeSystem build_system(const DerivedParams& d, Mode mode) {
  const double omega = d.omega(mode);
  const double gamma_m = d.params.gamma_m;
  ModeSystem sys;
  sys.mode = mode;
  sys.a << 0.0, omega, -omega, -gamma_m;
  sys.c << 4.0 * d.g_eff(mode) / std::sqrt(d.params.kappa), 0.0;
  sys.n << 0.0, 0.0, 0.0, d.n_bar(mode);
  return sys;
}

std::pair<CovMat2, CovMat2> initial_covariance(const DerivedParams& d) {
  const double s = d.n_bar_plus / (2.0 * d.params.gamma_m);
  return {CovMat2::scalar(s), CovMat2::scalar(s)};
}

Eigen::Matrix2d riccati_rhs(const Eigen::Matrix2d& v, const ModeSystem& sys) {
  const Eigen::Vector2d vc = v * sys.c.transpose();
  const Eigen::Matrix2d r = sys.a * v + v * sys.a.transpose() + sys.n - vc * vc.transpose();
  return 0.5 * (r + r.transpose());
}

CovMat2 riccati_rhs(const CovMat2& v, const ModeSystem& sys) {
  return CovMat2::from_matrix(riccati_rhs(v.matrix(), sys));
}

std::vector<double> default_output_grid(double t_end, std::size_t points, double t_min) {
  std::vector<double> grid{0.0};
  if (!(t_end > 0.0)) return grid;
  if (t_end <= t_min || points < 2) {
    grid.push_back(t_end);
    return grid;
  }
  const double lo = std::log10(t_min);
  const double hi = std::log10(t_end);
  for (std::size_t i = 0; i < points; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    grid.push_back(std::pow(10.0, x));
  }
  grid.back() = t_end;
  return grid;
}

namespace {

void check_config(const IntegratorConfig& cfg, const std::vector<double>& grid) {
  if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0) || !(cfg.max_step > 0.0)) {
    throw Error(Errc::Config, "integrator tolerances and max_step must be positive");
  }
  if (!(cfg.t_end >= 0.0) || !std::isfinite(cfg.t_end)) {
    throw Error(Errc::Config, "t_end must be finite and >= 0");
  }
  if (grid.empty()) throw Error(Errc::Config, "empty output grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 0.0 || grid[i] > cfg.t_end) {
      throw Error(Errc::Config, "output time " + format_value(grid[i]) + " outside [0, t_end]");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw Error(Errc::Config, "output grid must be strictly increasing");
    }
  }
}

}  // namespace

ModeTrajectory evolve(const ModeSystem& sys, const CovMat2& v0, const IntegratorConfig& cfg) {
  const std::vector<double> grid =
      cfg.output_grid.empty() ? default_output_grid(cfg.t_end) : cfg.output_grid;
  check_config(cfg, grid);
  if (!v0.is_psd(cfg.abs_tol)) throw Error(Errc::NotPSD, "initial covariance is not PSD");

  ModeTrajectory out;
  out.mode = sys.mode;
  out.min_det = v0.det();

  const auto f = [&](double, const Eigen::Matrix2d& v) {
    ++out.stats.rhs_evaluations;
    return riccati_rhs(v, sys);
  };

  ode::StepControl ctl;
  ctl.rel_tol = cfg.rel_tol;
  ctl.abs_tol = cfg.abs_tol;
  ctl.max_step = cfg.max_step;
  ode::PiController controller(ctl);

  double t = 0.0;
  Eigen::Matrix2d y = v0.matrix();
  Eigen::Matrix2d k1 = f(t, y);
  double h = ode::initial_step(f, t, y, k1, ctl);
  int streak = 0;
  double streak_start = 0.0;

  const auto record = [&](double time) {
    const CovMat2 v = CovMat2::from_matrix(y);
    const double det = v.det();
    out.min_det = std::min(out.min_det, det);
    if (det < 1.0 - kUncertaintyTolerance) ++out.uncertainty_violations;
    out.t.push_back(time);
    out.v.push_back(v);
  };

  std::size_t next = 0;
  while (next < grid.size()) {
    const double target = grid[next];
    if (t >= target) {
      record(target);
      ++next;
      continue;
    }
    if (out.stats.accepted + out.stats.rejected >= cfg.max_steps) {
      throw Error(Errc::StepSizeUnderflow, "step budget exhausted at t = " + format_value(t));
    }

    const bool lands = h >= target - t;
    const double h_try = lands ? target - t : h;
    auto step = ode::dopri5_step(f, t, y, k1, h_try, ctl);
    if (!std::isfinite(step.error)) step.error = 1e10;

    if (step.error <= 1.0) {
      ++out.stats.accepted;
      t = lands ? target : t + h_try;
      y = 0.5 * (step.y + step.y.transpose());
      k1 = step.dydt;
      const double fac = controller.accept_factor(step.error);
      h = lands ? std::max(h, h_try * fac) : h_try * fac;
      h = std::min(h, cfg.max_step);

      const double lowest = CovMat2::from_matrix(y).min_eigenvalue();
      if (lowest < -cfg.abs_tol) {
        throw Error(Errc::PositivityLost, "covariance eigenvalue " + format_value(lowest) +
                                              " at t = " + format_value(t));
      }

      if (k1.norm() < cfg.converge_tol * y.norm()) {
        if (streak++ == 0) streak_start = t;
        if (streak >= cfg.converge_streak && !out.converged) {
          out.converged = true;
          out.converged_at = streak_start;
        }
      } else {
        streak = 0;
      }
      if (out.converged && cfg.stop_when_converged) {
        if (t < target) record(t);
        break;
      }
    } else {
      ++out.stats.rejected;
      h = h_try * controller.reject_factor(step.error);
    }
    if (h < ctl.min_step * std::max(1.0, std::abs(t))) {
      throw Error(Errc::StepSizeUnderflow, "step size " + format_value(h) +
                                               " underflow at t = " + format_value(t));
    }
  }
  return out;
}

Trajectory evolve_modes(const DerivedParams& d, IntegratorConfig cfg) {
  if (cfg.output_grid.empty()) cfg.output_grid = default_output_grid(cfg.t_end);
  const auto [v_plus, v_minus] = initial_covariance(d);
  const ModeSystem sys_plus = build_system(d, Mode::plus);
  const ModeSystem sys_minus = build_system(d, Mode::minus);

  auto minus_future =
      std::async(std::launch::async, [&] { return evolve(sys_minus, v_minus, cfg); });
  ModeTrajectory plus = evolve(sys_plus, v_plus, cfg);
  ModeTrajectory minus = minus_future.get();

  Trajectory traj;
  // Early stopping can leave the modes with different tails; keep the common grid.
  const std::size_t n = std::min(plus.t.size(), minus.t.size());
  traj.samples.reserve(n);
  for (std::size_t i = 0; i < n && plus.t[i] == minus.t[i]; ++i) {
    traj.samples.push_back({plus.t[i], plus.v[i], minus.v[i]});
  }
  traj.converged = plus.converged && minus.converged;
  if (traj.converged) traj.converged_at = std::max(*plus.converged_at, *minus.converged_at);
  traj.uncertainty_violations = plus.uncertainty_violations + minus.uncertainty_violations;
  traj.min_det = std::min(plus.min_det, minus.min_det);
  return traj;
}

std::vector<LogNegativity> negativity_series(const Trajectory& traj, double epsilon) {
  const BeamSplitterMap map = beam_splitter(epsilon);
  std::vector<LogNegativity> out;
  out.reserve(traj.samples.size());
  for (const auto& s : traj.samples) out.push_back(log_negativity(combine(s.plus, s.minus, map)));
  return out;
}

CovMat2 regime_approximation(double t, const DerivedParams& d, Mode mode, Regime regime) {
  if (!(t > 0.0)) throw Error(Errc::InvalidInput, "regime approximation needs t > 0");
  const double kappa = d.params.kappa;
  const double g2 = d.g_eff(mode) * d.g_eff(mode);
  const double omega = d.omega(mode);
  if (regime == Regime::early) {
    const double n_th = d.n_th(mode);
    return {kappa / (16.0 * t * g2), omega * (n_th + 0.5) * t, 2.0 * n_th + 1.0};
  }
  return {kappa / (4.0 * t * g2), 3.0 * kappa / (8.0 * t * t * g2 * omega),
          3.0 * kappa / (8.0 * t * t * t * g2 * omega * omega)};
}

}  // namespace gie

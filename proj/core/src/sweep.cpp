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

#include "giesim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "giesim/errors.hpp"

namespace gie {

SweepAxis SweepAxis::logspace(std::string name, double start, double stop, std::size_t num) {
  if (!(start > 0.0) || !(stop > 0.0) || num == 0) {
    throw Error(Errc::Config, "logspace axis needs positive bounds and num >= 1");
  }
  SweepAxis axis{std::move(name), {}};
  if (num == 1) {
    axis.values.push_back(start);
    return axis;
  }
  const double lo = std::log10(start);
  const double hi = std::log10(stop);
  for (std::size_t i = 0; i < num; ++i) {
    axis.values.push_back(
        std::pow(10.0, lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(num - 1)));
  }
  axis.values.front() = start;
  axis.values.back() = stop;
  return axis;
}

void validate(const SweepSpec& spec) {
  if (spec.axes.empty() || spec.axes.size() > 2) {
    throw Error(Errc::Config, "a sweep needs one or two axes");
  }
  for (const SweepAxis& axis : spec.axes) {
    if (!is_param_key(axis.name)) {
      throw Error(Errc::Config, "sweep axis '" + axis.name + "' is not a parameter key");
    }
    if (axis.values.empty()) throw Error(Errc::Config, "sweep axis '" + axis.name + "' is empty");
    for (double v : axis.values) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw Error(Errc::Config, "sweep axis '" + axis.name + "' has a non-positive value");
      }
    }
  }
  if (spec.axes.size() == 2 && spec.axes[0].name == spec.axes[1].name) {
    throw Error(Errc::Config, "sweep axes must be distinct");
  }
  if (!(spec.target_snr >= 0.0) || !(spec.t_meas_factor > 0.0)) {
    throw Error(Errc::Config, "target_snr must be >= 0 and t_meas_factor > 0");
  }
}

std::optional<double> settle_time(const Trajectory& traj, const CovMat2& steady_plus,
                                  const CovMat2& steady_minus, double tolerance) {
  const Eigen::Matrix2d sp = steady_plus.matrix();
  const Eigen::Matrix2d sm = steady_minus.matrix();
  std::optional<double> settled;
  for (const auto& s : traj.samples) {
    const double dev = std::max((s.plus.matrix() - sp).norm() / sp.norm(),
                                (s.minus.matrix() - sm).norm() / sm.norm());
    if (dev < tolerance) {
      if (!settled) settled = s.t;
    } else {
      settled.reset();
    }
  }
  return settled;
}

TrajectorySummary summarize(const Trajectory& traj, const DerivedParams& d) {
  TrajectorySummary out;
  const auto en = negativity_series(traj, d.epsilon);
  for (std::size_t i = 0; i < en.size(); ++i) {
    if (en[i].raw > 0.0) {
      out.onset_time = traj.samples[i].t;
      if (i > 0) out.onset_after = traj.samples[i - 1].t;
      break;
    }
  }
  if (!en.empty()) out.en_final = en.back().raw;
  out.settle_time = settle_time(traj, steady_covariance(d, Mode::plus),
                                steady_covariance(d, Mode::minus));
  out.converged = traj.converged;
  out.converged_at = traj.converged_at;
  out.uncertainty_violations = traj.uncertainty_violations;
  return out;
}

SweepRow run_point(const SweepSpec& spec, const std::vector<double>& axis_values) {
  SweepRow row;
  row.axis_values = axis_values;
  try {
    ExperimentParams params = spec.base;
    for (std::size_t a = 0; a < spec.axes.size(); ++a) {
      set_param(params, spec.axes[a].name, axis_values[a]);
    }
    const DerivedParams d = derive(params, spec.consts);
    row.steady = steady_report(d);
    if (spec.pipeline == Pipeline::full_evolution) {
      row.trajectory = summarize(evolve_modes(d, spec.integrator), d);
    }
    if (row.steady->en.raw > 0.0) {
      row.budget = budget_at_steady_state(d, spec.target_snr, spec.moments, spec.t_meas_factor)
                       .budget;
    }
    row.ok = true;
  } catch (const std::exception& e) {
    row.ok = false;
    row.error = e.what();
  }
  return row;
}

SweepResult run_sweep(const SweepSpec& spec) {
  validate(spec);

  std::vector<std::vector<double>> points;
  if (spec.axes.size() == 1) {
    for (double x : spec.axes[0].values) points.push_back({x});
  } else {
    for (double x : spec.axes[0].values) {
      for (double y : spec.axes[1].values) points.push_back({x, y});
    }
  }

  SweepResult result;
  result.spec = spec;
  result.rows.resize(points.size());

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      result.rows[i] = run_point(spec, points[i]);
      result.rows[i].index = i;
    }
  };
  const unsigned workers =
      std::clamp<unsigned>(spec.workers, 1u, static_cast<unsigned>(std::max<std::size_t>(1, points.size())));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return result;
}

}  // namespace gie

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

// Dormand-Prince 5(4) embedded Runge-Kutta pair with PI step-size control
// (Hairer, Norsett & Wanner, Solving ODEs I, II.4 and IV.2). The state is any
// fixed-size Eigen object; the error norm is the usual RMS of
// err_i / (atol + rtol * max(|y_i|, |y_new_i|)).

#include <algorithm>
#include <cmath>
#include <cstddef>

#include <Eigen/Core>

namespace gie::ode {

struct StepControl {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  double max_step = 1e300;
  double min_step = 1e-14;  ///< relative to max(|t|, 1)
  double safety = 0.9;
  double min_factor = 0.2;
  double max_factor = 10.0;
  double beta = 0.04;  ///< PI stabilisation
};

template <typename State>
struct StepResult {
  State y;
  State dydt;  ///< f(t + h, y), reused as first stage of the next step (FSAL)
  double error;
};

namespace tableau {
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b_hat
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
}  // namespace tableau

/// One trial step of size h from (t, y) with f(t, y) = k1 already known.
template <typename State, typename Rhs>
StepResult<State> dopri5_step(const Rhs& f, double t, const State& y, const State& k1, double h,
                              const StepControl& ctl) {
  using namespace tableau;
  const State k2 = f(t + c2 * h, State(y + h * (a21 * k1)));
  const State k3 = f(t + c3 * h, State(y + h * (a31 * k1 + a32 * k2)));
  const State k4 = f(t + c4 * h, State(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
  const State k5 = f(t + c5 * h, State(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
  const State k6 =
      f(t + h, State(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
  State y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  const State k7 = f(t + h, y_new);
  const State err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

  const State scale =
      (ctl.abs_tol + ctl.rel_tol * y.cwiseAbs().cwiseMax(y_new.cwiseAbs()).array()).matrix();
  const double norm =
      std::sqrt((err.array() / scale.array()).square().sum() / static_cast<double>(err.size()));
  return {std::move(y_new), k7, norm};
}

/// Hairer's initial step heuristic for a method of order 5.
template <typename State, typename Rhs>
double initial_step(const Rhs& f, double t, const State& y, const State& k1,
                    const StepControl& ctl) {
  const State scale = (ctl.abs_tol + ctl.rel_tol * y.cwiseAbs().array()).matrix();
  const double n = static_cast<double>(y.size());
  const double d0 = std::sqrt((y.array() / scale.array()).square().sum() / n);
  const double d1 = std::sqrt((k1.array() / scale.array()).square().sum() / n);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, ctl.max_step);
  const State y1 = y + h0 * k1;
  const State k2 = f(t + h0, y1);
  const double d2 = std::sqrt(((k2 - k1).array() / scale.array()).square().sum() / n) / h0;
  const double dmax = std::max(d1, d2);
  const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 1.0 / 5.0);
  return std::min({100.0 * h0, h1, ctl.max_step});
}

/// PI controller: returns the factor for the next step size.
class PiController {
 public:
  explicit PiController(const StepControl& ctl) : ctl_(ctl) {}

  double accept_factor(double err) {
    const double alpha = 0.2 - 0.75 * ctl_.beta;
    double fac;
    if (err == 0.0) {
      fac = ctl_.max_factor;
    } else {
      fac = ctl_.safety * std::pow(err, -alpha) * std::pow(err_prev_, ctl_.beta);
      fac = std::clamp(fac, ctl_.min_factor, ctl_.max_factor);
    }
    err_prev_ = std::max(err, 1e-4);
    if (rejected_last_) fac = std::min(fac, 1.0);
    rejected_last_ = false;
    return fac;
  }

  double reject_factor(double err) {
    rejected_last_ = true;
    return std::max(ctl_.min_factor, ctl_.safety * std::pow(err, -0.2));
  }

 private:
  StepControl ctl_;
  double err_prev_ = 1e-4;
  bool rejected_last_ = false;
};

}  // namespace gie::ode

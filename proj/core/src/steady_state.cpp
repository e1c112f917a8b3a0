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

#include "giesim/steady_state.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "giesim/errors.hpp"

namespace gie {

namespace {

// gamma - gamma_m without cancellation for weak measurement.
double rate_excess(const DerivedParams& d, Mode mode, double gamma) {
  const double omega = d.omega(mode);
  const double nl = d.n_bar(mode) * d.lambda(mode);
  const double gamma_sq_excess = 2.0 * omega * nl / (std::sqrt(omega * omega + nl) + omega);
  return gamma_sq_excess / (gamma + d.params.gamma_m);
}

}  // namespace

double effective_rate(const DerivedParams& d, Mode mode) {
  const double omega = d.omega(mode);
  const double gm = d.params.gamma_m;
  const double nl = d.n_bar(mode) * d.lambda(mode);
  return std::sqrt(gm * gm - 2.0 * omega * omega +
                   2.0 * omega * std::sqrt(omega * omega + nl));
}

CovMat2 steady_covariance(const DerivedParams& d, Mode mode) {
  const double lambda = d.lambda(mode);
  if (!(lambda > 0.0)) {
    throw Error(Errc::DegenerateMeasurement,
                std::string("no measurement on the ") + mode_name(mode) + " mode");
  }
  const double omega = d.omega(mode);
  const double gm = d.params.gamma_m;
  const double gamma = effective_rate(d, mode);
  const double x = rate_excess(d, mode, gamma);
  return {x / lambda, x * x / (2.0 * lambda * omega),
          x * (2.0 * omega * omega + gamma * gamma - gm * gamma) / (2.0 * lambda * omega * omega)};
}

ApproximationRegime approximation_regime(const DerivedParams& d) {
  const double omega = d.Omega_plus;
  const double gm = d.params.gamma_m;
  ApproximationRegime r{};
  r.noise_over_omega2 = d.n_bar_plus * d.lambda_plus / (omega * omega);
  r.omega2_over_gamma2 = omega * omega / (gm * gm);
  r.readout_over_nth =
      4.0 * d.g_plus * d.g_plus / (d.params.kappa * gm) / d.n_th_plus;
  r.noise_dominant = r.noise_over_omega2 > kRegimeFactor;
  r.underdamped = r.omega2_over_gamma2 > kRegimeFactor;
  r.readout_dominant = r.readout_over_nth > kRegimeFactor;
  r.n_th_at_least_one = d.n_th_plus >= 1.0;
  return r;
}

double analytic_negativity_bracket(const DerivedParams& d) {
  const double gm = d.params.gamma_m;
  const double prefactor = d.params.kappa * gm / (16.0 * d.g_plus * d.g_plus);
  const double drive = d.params.Omega * d.epsilon / (std::numbers::sqrt2 * gm) - 4.0 * d.n_th_plus;
  return 1.0 - prefactor * drive;
}

double analytic_negativity(const DerivedParams& d) {
  const double bracket = analytic_negativity_bracket(d);
  if (!(bracket > 0.0)) {
    throw Error(Errc::LogDomain, "analytic negativity bracket " + format_value(bracket) +
                                     " <= 0: outside the expansion's validity");
  }
  return -0.5 * std::log2(bracket);
}

Criterion entanglement_criterion(const DerivedParams& d) {
  const double margin = d.params.Omega * d.epsilon /
                        (4.0 * std::numbers::sqrt2 * d.params.gamma_m * d.n_th_plus);
  return {margin > 1.0, margin};
}

double t_entangle(const DerivedParams& d) {
  if (!(d.epsilon > 0.0)) {
    throw Error(Errc::InvalidInput, "t_en diverges without gravitational coupling");
  }
  return std::numbers::pi / (d.params.Omega * d.epsilon);
}

SteadyReport steady_report(const DerivedParams& d) {
  SteadyReport r{};
  r.v_plus = steady_covariance(d, Mode::plus);
  r.v_minus = steady_covariance(d, Mode::minus);
  r.gamma_plus = effective_rate(d, Mode::plus);
  r.gamma_minus = effective_rate(d, Mode::minus);
  r.en = log_negativity(combine(r.v_plus, r.v_minus, beam_splitter(d.epsilon)));
  const double bracket = analytic_negativity_bracket(d);
  if (bracket > 0.0) r.en_analytic = -0.5 * std::log2(bracket);
  const Criterion c = entanglement_criterion(d);
  r.criterion_met = c.met;
  r.criterion_margin = c.margin;
  if (d.epsilon > 0.0) r.t_en = t_entangle(d);
  r.regime = approximation_regime(d);
  return r;
}

}  // namespace gie

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

#include "giesim/physical_params.hpp"

#include <array>
#include <cmath>
#include <string>

#include "giesim/errors.hpp"

namespace gie {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw Error(Errc::NonPositiveInput,
                std::string(name) + " must be finite and > 0, got " + format_value(value));
  }
}

}  // namespace

ExperimentParams ExperimentParams::reference() {
  return ExperimentParams{
      .Gamma = from_hz(1e-18),
      .Omega = from_hz(1e-3),
      .gamma_m = from_hz(1e-6),
      .kappa = from_hz(1e8),
      .omega_c = from_hz(2.8e14),
      .P_in = 1e-4,
      .ell = 1.0,
      .T = 1.0,
      .rho = 2.0e4,
      .m = 0.1,
      .Lambda = 2.0,
  };
}

void validate(const ExperimentParams& p) {
  require_positive(p.Gamma, "Gamma");
  require_positive(p.Omega, "Omega");
  require_positive(p.gamma_m, "gamma_m");
  require_positive(p.kappa, "kappa");
  require_positive(p.omega_c, "omega_c");
  require_positive(p.P_in, "P_in");
  require_positive(p.ell, "ell");
  require_positive(p.T, "T");
  require_positive(p.rho, "rho");
  require_positive(p.m, "m");
  require_positive(p.Lambda, "Lambda");
  if (p.Gamma > p.gamma_m) {
    throw Error(Errc::InvalidInput,
                "bare dissipation Gamma exceeds the feedback-damped rate gamma_m");
  }
}

void validate(const PhysicalConstants& c) {
  // G = 0 is allowed: it switches gravity off.
  if (!(c.G >= 0.0) || !std::isfinite(c.G)) {
    throw Error(Errc::NonPositiveInput, "G must be finite and >= 0");
  }
  require_positive(c.hbar, "hbar");
  require_positive(c.k_B, "k_B");
}

namespace {

struct KeyBinding {
  std::string_view key;
  double ExperimentParams::*field;
  bool per_2pi;
};

constexpr std::array<KeyBinding, 11> kBindings{{
    {"Gamma_over_2pi_Hz", &ExperimentParams::Gamma, true},
    {"Omega_over_2pi_Hz", &ExperimentParams::Omega, true},
    {"gamma_m_over_2pi_Hz", &ExperimentParams::gamma_m, true},
    {"kappa_over_2pi_Hz", &ExperimentParams::kappa, true},
    {"omega_c_over_2pi_Hz", &ExperimentParams::omega_c, true},
    {"P_in_W", &ExperimentParams::P_in, false},
    {"ell_m", &ExperimentParams::ell, false},
    {"T_K", &ExperimentParams::T, false},
    {"rho_kg_m3", &ExperimentParams::rho, false},
    {"m_kg", &ExperimentParams::m, false},
    {"Lambda", &ExperimentParams::Lambda, false},
}};

constexpr std::array<std::string_view, 11> kKeys = [] {
  std::array<std::string_view, 11> keys{};
  for (std::size_t i = 0; i < kBindings.size(); ++i) keys[i] = kBindings[i].key;
  return keys;
}();

const KeyBinding& binding(std::string_view key) {
  for (const auto& b : kBindings) {
    if (b.key == key) return b;
  }
  throw Error(Errc::Config, "unknown parameter key '" + std::string(key) + "'");
}

}  // namespace

std::span<const std::string_view> param_keys() { return kKeys; }

bool is_param_key(std::string_view key) {
  for (const auto& b : kBindings) {
    if (b.key == key) return true;
  }
  return false;
}

double get_param(const ExperimentParams& params, std::string_view key) {
  const KeyBinding& b = binding(key);
  const double value = params.*(b.field);
  return b.per_2pi ? to_hz(value) : value;
}

void set_param(ExperimentParams& params, std::string_view key, double value) {
  const KeyBinding& b = binding(key);
  params.*(b.field) = b.per_2pi ? from_hz(value) : value;
}

DerivedParams derive(const ExperimentParams& p, const PhysicalConstants& c) {
  validate(p);
  validate(c);

  DerivedParams d{};
  d.params = p;
  d.consts = c;

  const double volume = p.m / (p.rho * p.Lambda);  // L^3
  d.L = std::cbrt(volume);
  d.epsilon = 4.0 * c.G * p.m / (volume * p.Omega * p.Omega);
  if (!(d.epsilon < 1.0)) {
    throw Error(Errc::EpsilonOutOfRange,
                "gravitational coupling epsilon = " + format_value(d.epsilon) +
                    " >= 1, differential mode is unstable");
  }

  d.Omega_plus = p.Omega;
  d.Omega_minus = p.Omega * std::sqrt(1.0 - d.epsilon);

  d.g = (p.omega_c / p.ell) * std::sqrt(c.hbar / (2.0 * p.m * p.Omega));
  const double drive = 4.0 * p.P_in * p.Omega / (c.hbar * p.omega_c * p.kappa);
  d.g_plus = d.g * std::sqrt(drive / d.Omega_plus);
  d.g_minus = d.g * std::sqrt(drive / d.Omega_minus);

  const double thermal = c.k_B * p.T * p.Gamma / (p.gamma_m * c.hbar);
  d.n_th_plus = thermal / d.Omega_plus;
  d.n_th_minus = thermal / d.Omega_minus;

  d.lambda_plus = 16.0 * d.g_plus * d.g_plus / p.kappa;
  d.lambda_minus = 16.0 * d.g_minus * d.g_minus / p.kappa;
  d.n_bar_plus = 2.0 * p.gamma_m * (2.0 * d.n_th_plus + 1.0) + d.lambda_plus;
  d.n_bar_minus = 2.0 * p.gamma_m * (2.0 * d.n_th_minus + 1.0) + d.lambda_minus;

  d.bad_cavity_warning = !(p.kappa / p.Omega > kBadCavityRatio);
  return d;
}

}  // namespace gie

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

#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gie {

/// CODATA-2018 values in SI units.
struct PhysicalConstants {
  double G = 6.67430e-11;
  double hbar = 1.054571817e-34;
  double k_B = 1.380649e-23;
};

/// Raw experimental inputs. All rates are angular (rad/s); use
/// `from_hz` when reading values quoted as f = rate / 2pi.
struct ExperimentParams {
  double Gamma;    ///< bare mechanical dissipation rate
  double Omega;    ///< mechanical frequency
  double gamma_m;  ///< effective damping under feedback
  double kappa;    ///< optical decay rate
  double omega_c;  ///< optical resonance frequency
  double P_in;     ///< input laser power (W)
  double ell;      ///< cavity length (m)
  double T;        ///< environment temperature (K)
  double rho;      ///< mirror density (kg/m^3)
  double m;        ///< mirror mass (kg)
  double Lambda;   ///< geometry factor, m = rho L^3 Lambda

  /// The reference parameter set.
  static ExperimentParams reference();

  bool operator==(const ExperimentParams&) const = default;
};

enum class Mode { plus, minus };

constexpr const char* mode_name(Mode mode) noexcept {
  return mode == Mode::plus ? "plus" : "minus";
}

struct DerivedParams {
  ExperimentParams params;
  PhysicalConstants consts;

  double L;            ///< mirror separation (m)
  double epsilon;      ///< gravitational coupling 4Gm/(L^3 Omega^2)
  double Omega_plus;
  double Omega_minus;
  double g;            ///< bare optomechanical coupling
  double g_plus;
  double g_minus;
  double n_th_plus;
  double n_th_minus;
  double n_bar_plus;   ///< force-noise magnitude (rad/s)
  double n_bar_minus;
  double lambda_plus;  ///< measurement rate 16 g^2 / kappa
  double lambda_minus;

  /// kappa/Omega <= 1e3: the adiabatic elimination of the cavity is suspect.
  bool bad_cavity_warning = false;

  double omega(Mode mode) const { return mode == Mode::plus ? Omega_plus : Omega_minus; }
  double g_eff(Mode mode) const { return mode == Mode::plus ? g_plus : g_minus; }
  double n_th(Mode mode) const { return mode == Mode::plus ? n_th_plus : n_th_minus; }
  double n_bar(Mode mode) const { return mode == Mode::plus ? n_bar_plus : n_bar_minus; }
  double lambda(Mode mode) const { return mode == Mode::plus ? lambda_plus : lambda_minus; }
};

/// Converts an ordinary frequency f (Hz) to the angular rate 2 pi f.
constexpr double from_hz(double f) noexcept { return 2.0 * std::numbers::pi * f; }
constexpr double to_hz(double rate) noexcept { return rate / (2.0 * std::numbers::pi); }

/// Bad-cavity threshold on kappa / Omega.
inline constexpr double kBadCavityRatio = 1e3;

/// Validates the raw inputs and evaluates every derived coupling, frequency
/// and noise number. Throws gie::Error (NonPositiveInput, InvalidInput,
/// EpsilonOutOfRange).
DerivedParams derive(const ExperimentParams& params,
                     const PhysicalConstants& consts = PhysicalConstants{});

void validate(const ExperimentParams& params);
void validate(const PhysicalConstants& consts);

// Config schema. Rates are quoted per 2 pi in Hz, everything else in SI.

/// Keys in canonical order: Gamma_over_2pi_Hz, Omega_over_2pi_Hz,
/// gamma_m_over_2pi_Hz, kappa_over_2pi_Hz, omega_c_over_2pi_Hz, P_in_W,
/// ell_m, T_K, rho_kg_m3, m_kg, Lambda.
std::span<const std::string_view> param_keys();

bool is_param_key(std::string_view key);

/// Reads a field in config units. Throws Config for unknown keys.
double get_param(const ExperimentParams& params, std::string_view key);

/// Writes a field given in config units (Hz keys are converted to rad/s).
void set_param(ExperimentParams& params, std::string_view key, double value);

}  // namespace gie

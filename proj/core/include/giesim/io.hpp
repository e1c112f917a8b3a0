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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "giesim/metrology.hpp"
#include "giesim/physical_params.hpp"
#include "giesim/riccati.hpp"
#include "giesim/steady_state.hpp"
#include "giesim/sweep.hpp"

namespace gie {

std::string_view version() noexcept;

// ---------------------------------------------------------------------------
// configuration

struct RunConfig {
  ExperimentParams params = ExperimentParams::reference();
  PhysicalConstants consts;
};

/// Missing keys fall back to the reference values; unknown keys, non-numeric
/// values and malformed JSON throw Errc::Config. An optional "constants"
/// object may override G, hbar and k_B.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

/// Fully resolved config in file units (round-trips through parse_config).
nlohmann::json config_to_json(const RunConfig& cfg);

SweepSpec parse_sweep_spec(const nlohmann::json& j);
SweepSpec load_sweep_spec(const std::filesystem::path& path);
nlohmann::json sweep_spec_to_json(const SweepSpec& spec);

nlohmann::json load_json(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// CSV

/// Shortest text that survives a round trip: 17 significant digits.
std::string format_number(double x);

/// Purely numeric table; empty cells read back as NaN.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(std::string_view name) const;
};

void write_csv(std::ostream& os, const CsvTable& table);
CsvTable read_csv(std::istream& is);
CsvTable read_csv(const std::filesystem::path& path);

/// Column order: t_s, Vqq_plus, Vqp_plus, Vpp_plus, Vqq_minus, Vqp_minus,
/// Vpp_minus.
CsvTable trajectory_table(const Trajectory& traj);

/// trajectory_table plus EN_raw, EN, purity_plus, purity_minus,
/// squeeze_angle_plus, eig_ratio_plus, squeeze_angle_minus, eig_ratio_minus.
CsvTable trajectory_table_with_diagnostics(const Trajectory& traj, double epsilon);

/// One row per grid point; failed rows keep their status and error text.
void write_sweep_csv(std::ostream& os, const SweepResult& result);

// ---------------------------------------------------------------------------
// flat records

nlohmann::json to_json(const SteadyReport& report);
nlohmann::json to_json(const SnrBudget& budget);
nlohmann::json to_json(const DerivedParams& d);
nlohmann::json to_json(const SweepResult& result);

/// Everything needed to re-run a command.
struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  RunConfig config;
  nlohmann::json options = nlohmann::json::object();
  std::string started_utc;
  std::string finished_utc;
  std::vector<std::string> outputs;
};

nlohmann::json to_json(const RunManifest& manifest);
std::string utc_timestamp();

}  // namespace gie

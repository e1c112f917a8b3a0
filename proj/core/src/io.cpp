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

#include "giesim/io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "giesim/errors.hpp"

#ifndef GIESIM_VERSION
#define GIESIM_VERSION "0.0.0"
#endif

namespace gie {

using nlohmann::json;

std::string_view version() noexcept { return GIESIM_VERSION; }

namespace {

double require_number(const json& j, std::string_view key) {
  if (!j.is_number()) {
    throw Error(Errc::Config, "value of '" + std::string(key) + "' must be a number");
  }
  return j.get<double>();
}

void require_object(const json& j, std::string_view what) {
  if (!j.is_object()) throw Error(Errc::Config, std::string(what) + " must be a JSON object");
}

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

template <typename T>
json optional_json(const std::optional<T>& x) {
  return x ? json(*x) : json(nullptr);
}

}  // namespace

// ---------------------------------------------------------------------------
// configuration

RunConfig parse_config(const json& j) {
  require_object(j, "config");
  RunConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "constants") {
      require_object(value, "constants");
      for (const auto& [ckey, cvalue] : value.items()) {
        const double x = require_number(cvalue, ckey);
        if (ckey == "G") {
          cfg.consts.G = x;
        } else if (ckey == "hbar") {
          cfg.consts.hbar = x;
        } else if (ckey == "k_B") {
          cfg.consts.k_B = x;
        } else {
          throw Error(Errc::Config, "unknown constant '" + ckey + "'");
        }
      }
    } else if (is_param_key(key)) {
      set_param(cfg.params, key, require_number(value, key));
    } else {
      throw Error(Errc::Config, "unknown config key '" + key + "'");
    }
  }
  return cfg;
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Config, "cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(Errc::Config, "malformed JSON in '" + path.string() + "': " + e.what());
  }
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config(load_json(path)); }

json config_to_json(const RunConfig& cfg) {
  json j = json::object();
  for (std::string_view key : param_keys()) j[std::string(key)] = get_param(cfg.params, key);
  j["constants"] = {{"G", cfg.consts.G}, {"hbar", cfg.consts.hbar}, {"k_B", cfg.consts.k_B}};
  return j;
}

SweepSpec parse_sweep_spec(const json& j) {
  require_object(j, "sweep spec");
  SweepSpec spec;
  std::size_t points = 400;
  double t_min = 1e-2;
  std::optional<std::vector<double>> explicit_grid;
  for (const auto& [key, value] : j.items()) {
    if (key == "base") {
      const RunConfig base = parse_config(value);
      spec.base = base.params;
      spec.consts = base.consts;
    } else if (key == "axes") {
      if (!value.is_array()) throw Error(Errc::Config, "'axes' must be an array");
      for (const json& a : value) {
        require_object(a, "axis");
        if (!a.contains("name") || !a["name"].is_string()) {
          throw Error(Errc::Config, "axis needs a string 'name'");
        }
        const std::string name = a["name"].get<std::string>();
        if (a.contains("values")) {
          if (!a["values"].is_array()) throw Error(Errc::Config, "'values' must be an array");
          SweepAxis axis{name, {}};
          for (const json& v : a["values"]) axis.values.push_back(require_number(v, name));
          spec.axes.push_back(std::move(axis));
        } else if (a.contains("logspace")) {
          const json& ls = a["logspace"];
          require_object(ls, "logspace");
          for (const char* k : {"start", "stop", "num"}) {
            if (!ls.contains(k)) throw Error(Errc::Config, std::string("logspace needs '") + k + "'");
          }
          const double num = require_number(ls["num"], "num");
          if (!(num >= 1.0) || num != std::floor(num)) {
            throw Error(Errc::Config, "logspace 'num' must be a positive integer");
          }
          spec.axes.push_back(SweepAxis::logspace(name, require_number(ls["start"], "start"),
                                                  require_number(ls["stop"], "stop"),
                                                  static_cast<std::size_t>(num)));
        } else {
          throw Error(Errc::Config, "axis '" + name + "' needs 'values' or 'logspace'");
        }
      }
    } else if (key == "pipeline") {
      const std::string p = value.is_string() ? value.get<std::string>() : "";
      if (p == "steady_only") {
        spec.pipeline = Pipeline::steady_only;
      } else if (p == "full_evolution") {
        spec.pipeline = Pipeline::full_evolution;
      } else {
        throw Error(Errc::Config, "pipeline must be 'steady_only' or 'full_evolution'");
      }
    } else if (key == "integrator") {
      require_object(value, "integrator");
      for (const auto& [ikey, ivalue] : value.items()) {
        if (ikey == "stop_when_converged") {
          if (!ivalue.is_boolean()) throw Error(Errc::Config, "stop_when_converged is a boolean");
          spec.integrator.stop_when_converged = ivalue.get<bool>();
          continue;
        }
        if (ikey == "output_grid") {
          if (!ivalue.is_array()) throw Error(Errc::Config, "output_grid must be an array");
          explicit_grid.emplace();
          for (const json& t : ivalue) explicit_grid->push_back(require_number(t, ikey));
          continue;
        }
        const double x = require_number(ivalue, ikey);
        if (ikey == "rel_tol") spec.integrator.rel_tol = x;
        else if (ikey == "abs_tol") spec.integrator.abs_tol = x;
        else if (ikey == "t_end") spec.integrator.t_end = x;
        else if (ikey == "max_step") spec.integrator.max_step = x;
        else if (ikey == "converge_tol") spec.integrator.converge_tol = x;
        else if (ikey == "converge_streak") spec.integrator.converge_streak = static_cast<int>(x);
        else if (ikey == "points") points = static_cast<std::size_t>(x);
        else if (ikey == "t_min") t_min = x;
        else throw Error(Errc::Config, "unknown integrator key '" + ikey + "'");
      }
    } else if (key == "target_snr") {
      spec.target_snr = require_number(value, key);
    } else if (key == "t_meas_factor") {
      spec.t_meas_factor = require_number(value, key);
    } else if (key == "workers") {
      const double w = require_number(value, key);
      if (!(w >= 1.0)) throw Error(Errc::Config, "workers must be >= 1");
      spec.workers = static_cast<unsigned>(w);
    } else if (key == "moments") {
      const std::string m = value.is_string() ? value.get<std::string>() : "";
      if (m == "symmetric") {
        spec.moments = MomentConvention::symmetric;
      } else if (m == "strict_paper") {
        spec.moments = MomentConvention::strict_paper;
      } else {
        throw Error(Errc::Config, "moments must be 'symmetric' or 'strict_paper'");
      }
    } else {
      throw Error(Errc::Config, "unknown sweep key '" + key + "'");
    }
  }
  spec.integrator.output_grid = explicit_grid
                                    ? *explicit_grid
                                    : default_output_grid(spec.integrator.t_end, points, t_min);
  validate(spec);
  return spec;
}

SweepSpec load_sweep_spec(const std::filesystem::path& path) {
  return parse_sweep_spec(load_json(path));
}

json sweep_spec_to_json(const SweepSpec& spec) {
  json axes = json::array();
  for (const SweepAxis& a : spec.axes) axes.push_back({{"name", a.name}, {"values", a.values}});
  const IntegratorConfig& ic = spec.integrator;
  return {
      {"base", config_to_json({spec.base, spec.consts})},
      {"axes", axes},
      {"pipeline", spec.pipeline == Pipeline::steady_only ? "steady_only" : "full_evolution"},
      {"integrator",
       {{"rel_tol", ic.rel_tol},
        {"abs_tol", ic.abs_tol},
        {"t_end", ic.t_end},
        {"max_step", ic.max_step},
        {"converge_tol", ic.converge_tol},
        {"converge_streak", ic.converge_streak},
        {"stop_when_converged", ic.stop_when_converged},
        {"output_grid", ic.output_grid}}},
      {"target_snr", spec.target_snr},
      {"t_meas_factor", spec.t_meas_factor},
      {"moments", spec.moments == MomentConvention::symmetric ? "symmetric" : "strict_paper"},
      {"workers", spec.workers},
  };
}

// ---------------------------------------------------------------------------
// CSV

std::string format_number(double x) {
  if (std::isnan(x)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw Error(Errc::Config, "no CSV column '" + std::string(name) + "'");
}

void write_csv(std::ostream& os, const CsvTable& table) {
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    os << (i ? "," : "") << table.header[i];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
    os << '\n';
  }
}

CsvTable read_csv(std::istream& is) {
  CsvTable table;
  std::string line;
  const auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(s);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!s.empty() && s.back() == ',') cells.emplace_back();
    return cells;
  };
  if (!std::getline(is, line)) throw Error(Errc::Config, "empty CSV");
  table.header = split(line);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != table.header.size()) {
      throw Error(Errc::Config, "CSV row width does not match the header");
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      if (c.empty()) {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      char* end = nullptr;
      const double x = std::strtod(c.c_str(), &end);
      if (end == c.c_str() || *end != '\0') {
        throw Error(Errc::Config, "non-numeric CSV cell '" + c + "'");
      }
      row.push_back(x);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Config, "cannot open '" + path.string() + "'");
  return read_csv(in);
}

CsvTable trajectory_table(const Trajectory& traj) {
  CsvTable t;
  t.header = {"t_s", "Vqq_plus", "Vqp_plus", "Vpp_plus", "Vqq_minus", "Vqp_minus", "Vpp_minus"};
  for (const auto& s : traj.samples) {
    t.rows.push_back({s.t, s.plus.qq, s.plus.qp, s.plus.pp, s.minus.qq, s.minus.qp, s.minus.pp});
  }
  return t;
}

CsvTable trajectory_table_with_diagnostics(const Trajectory& traj, double epsilon) {
  CsvTable t = trajectory_table(traj);
  for (const char* h : {"EN_raw", "EN", "purity_plus", "purity_minus", "squeeze_angle_plus",
                        "eig_ratio_plus", "squeeze_angle_minus", "eig_ratio_minus"}) {
    t.header.emplace_back(h);
  }
  const auto en = negativity_series(traj, epsilon);
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const auto& s = traj.samples[i];
    const auto sp = squeezing_diagnostics(s.plus);
    const auto sm = squeezing_diagnostics(s.minus);
    auto& row = t.rows[i];
    row.insert(row.end(), {en[i].raw, en[i].clamped, purity(s.plus), purity(s.minus), sp.angle,
                           sp.eig_ratio, sm.angle, sm.eig_ratio});
  }
  return t;
}

void write_sweep_csv(std::ostream& os, const SweepResult& result) {
  os << "index";
  for (const auto& a : result.spec.axes) os << ',' << a.name;
  os << ",status,error,EN_raw,EN,EN_analytic,criterion_margin,criterion_met,t_en_s,"
        "gamma_plus,gamma_minus,Vqq_plus,Vqp_plus,Vpp_plus,Vqq_minus,Vqp_minus,Vpp_minus,"
        "onset_s,onset_after_s,EN_final,settle_s,converged_at_s,var_EN,n_meas,t_meas_s,tau_s\n";
  const auto num = [](const std::optional<double>& x) {
    return x ? format_number(*x) : std::string();
  };
  for (const SweepRow& row : result.rows) {
    os << row.index;
    for (double v : row.axis_values) os << ',' << format_number(v);
    os << ',' << (row.ok ? "ok" : "failed") << ',' << quote_csv(row.error);
    if (row.steady) {
      const SteadyReport& s = *row.steady;
      os << ',' << format_number(s.en.raw) << ',' << format_number(s.en.clamped) << ','
         << num(s.en_analytic) << ',' << format_number(s.criterion_margin) << ','
         << (s.criterion_met ? 1 : 0) << ',' << num(s.t_en) << ','
         << format_number(s.gamma_plus) << ',' << format_number(s.gamma_minus);
      for (const CovMat2& v : {s.v_plus, s.v_minus}) {
        os << ',' << format_number(v.qq) << ',' << format_number(v.qp) << ','
           << format_number(v.pp);
      }
    } else {
      os << std::string(14, ',');
    }
    if (row.trajectory) {
      const TrajectorySummary& tr = *row.trajectory;
      os << ',' << num(tr.onset_time) << ',' << num(tr.onset_after) << ','
         << format_number(tr.en_final) << ',' << num(tr.settle_time) << ','
         << num(tr.converged_at);
    } else {
      os << std::string(5, ',');
    }
    if (row.budget) {
      os << ',' << format_number(row.budget->var_en) << ',' << row.budget->n_meas << ','
         << format_number(row.budget->t_meas) << ',' << format_number(row.budget->tau);
    } else {
      os << std::string(4, ',');
    }
    os << '\n';
  }
}

// ---------------------------------------------------------------------------
// flat records

json to_json(const SteadyReport& r) {
  return {
      {"Vqq_plus", r.v_plus.qq},
      {"Vqp_plus", r.v_plus.qp},
      {"Vpp_plus", r.v_plus.pp},
      {"Vqq_minus", r.v_minus.qq},
      {"Vqp_minus", r.v_minus.qp},
      {"Vpp_minus", r.v_minus.pp},
      {"gamma_plus", r.gamma_plus},
      {"gamma_minus", r.gamma_minus},
      {"EN_raw", r.en.raw},
      {"EN", r.en.clamped},
      {"EN_analytic", optional_json(r.en_analytic)},
      {"criterion_met", r.criterion_met},
      {"criterion_margin", r.criterion_margin},
      {"t_en_s", optional_json(r.t_en)},
      {"regime_noise_over_omega2", r.regime.noise_over_omega2},
      {"regime_omega2_over_gamma2", r.regime.omega2_over_gamma2},
      {"regime_readout_over_nth", r.regime.readout_over_nth},
      {"regime_valid", r.regime.valid()},
  };
}

json to_json(const SnrBudget& b) {
  return {{"EN", b.en},           {"var_EN", b.var_en},
          {"target_snr", b.target_snr}, {"n_meas_exact", b.n_meas_exact},
          {"n_meas", b.n_meas},   {"t_meas_s", b.t_meas},
          {"tau_s", b.tau}};
}

json to_json(const DerivedParams& d) {
  return {{"L_m", d.L},
          {"epsilon", d.epsilon},
          {"Omega_plus", d.Omega_plus},
          {"Omega_minus", d.Omega_minus},
          {"g", d.g},
          {"g_plus", d.g_plus},
          {"g_minus", d.g_minus},
          {"n_th_plus", d.n_th_plus},
          {"n_th_minus", d.n_th_minus},
          {"n_bar_plus", d.n_bar_plus},
          {"n_bar_minus", d.n_bar_minus},
          {"lambda_plus", d.lambda_plus},
          {"lambda_minus", d.lambda_minus},
          {"bad_cavity_warning", d.bad_cavity_warning}};
}

json to_json(const SweepResult& result) {
  json rows = json::array();
  for (const SweepRow& row : result.rows) {
    json r = {{"index", row.index}, {"ok", row.ok}, {"error", row.error}};
    json axes = json::object();
    for (std::size_t a = 0; a < row.axis_values.size(); ++a) {
      axes[result.spec.axes[a].name] = row.axis_values[a];
    }
    r["axes"] = axes;
    r["steady"] = row.steady ? to_json(*row.steady) : json(nullptr);
    r["budget"] = row.budget ? to_json(*row.budget) : json(nullptr);
    if (row.trajectory) {
      const TrajectorySummary& t = *row.trajectory;
      r["trajectory"] = {{"onset_s", optional_json(t.onset_time)},
                         {"onset_after_s", optional_json(t.onset_after)},
                         {"EN_final", t.en_final},
                         {"settle_s", optional_json(t.settle_time)},
                         {"converged", t.converged},
                         {"converged_at_s", optional_json(t.converged_at)},
                         {"uncertainty_violations", t.uncertainty_violations}};
    } else {
      r["trajectory"] = nullptr;
    }
    rows.push_back(std::move(r));
  }
  std::size_t failed = 0;
  for (const SweepRow& row : result.rows) failed += row.ok ? 0 : 1;
  return {{"spec", sweep_spec_to_json(result.spec)},
          {"points", result.rows.size()},
          {"failed", failed},
          {"rows", rows}};
}

json to_json(const RunManifest& m) {
  return {{"tool", "giesim"},
          {"version", std::string(version())},
          {"command", m.command},
          {"argv", m.argv},
          {"config", config_to_json(m.config)},
          {"constants",
           {{"G", m.config.consts.G}, {"hbar", m.config.consts.hbar}, {"k_B", m.config.consts.k_B}}},
          {"options", m.options},
          {"started_utc", m.started_utc},
          {"finished_utc", m.finished_utc},
          {"outputs", m.outputs}};
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace gie

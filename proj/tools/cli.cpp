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

#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"

#include "giesim/errors.hpp"
#include "giesim/figures.hpp"
#include "giesim/io.hpp"
#include "giesim/metrology.hpp"
#include "giesim/riccati.hpp"
#include "giesim/steady_state.hpp"
#include "giesim/sweep.hpp"

namespace gie::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GlobalOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 20240601;
  bool strict_paper_moments = false;
};

std::string fmt(const char* spec, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

std::string sci(double x) { return fmt("%.6e", x); }

RunConfig resolve_config(const GlobalOptions& g) {
  return g.config_path.empty() ? RunConfig{} : load_config(g.config_path);
}

fs::path prepare_out(const GlobalOptions& g) {
  const fs::path dir(g.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::Config, "cannot create output directory '" + dir.string() + "'");
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw Error(Errc::Config, "cannot write '" + path.string() + "'");
  os << text;
  if (!os) throw Error(Errc::Config, "write failed for '" + path.string() + "'");
}

void write_table(const fs::path& path, const CsvTable& table) {
  std::ofstream os(path);
  if (!os) throw Error(Errc::Config, "cannot write '" + path.string() + "'");
  write_csv(os, table);
}

/// Every output file gets <file>.manifest.json next to it.
void write_manifest(const fs::path& output, RunManifest manifest) {
  manifest.finished_utc = utc_timestamp();
  manifest.outputs = {output.filename().string()};
  write_text(output.string() + ".manifest.json", to_json(manifest).dump(2) + "\n");
}

void print_steady(std::ostream& out, const DerivedParams& d, const SteadyReport& r) {
  out << "Steady state\n"
      << "  epsilon                  " << sci(d.epsilon) << "\n"
      << "  gamma+ / gamma- [rad/s]  " << sci(r.gamma_plus) << "  " << sci(r.gamma_minus) << "\n"
      << "  V+ (qq, qp, pp)          " << sci(r.v_plus.qq) << "  " << sci(r.v_plus.qp) << "  "
      << sci(r.v_plus.pp) << "\n"
      << "  V- (qq, qp, pp)          " << sci(r.v_minus.qq) << "  " << sci(r.v_minus.qp) << "  "
      << sci(r.v_minus.pp) << "\n"
      << "  E_N (raw)                " << sci(r.en.raw) << "\n"
      << "  E_N analytic             "
      << (r.en_analytic ? sci(*r.en_analytic) : std::string("outside domain")) << "\n"
      << "  criterion margin         " << fmt("%.4f", r.criterion_margin)
      << (r.criterion_met ? "  (met)" : "  (not met)") << "\n"
      << "  t_en [s]                 " << (r.t_en ? sci(*r.t_en) : std::string("inf")) << "\n";
  if (!r.regime.valid()) out << "  warning: outside the analytic approximation regime\n";
  if (d.bad_cavity_warning) out << "  warning: kappa/Omega <= 1e3 (bad-cavity limit)\n";
}

int cmd_steady(const GlobalOptions& g, RunManifest manifest, std::ostream& out) {
  const RunConfig cfg = resolve_config(g);
  manifest.config = cfg;
  const DerivedParams d = derive(cfg.params, cfg.consts);
  const SteadyReport r = steady_report(d);
  print_steady(out, d, r);
  const fs::path path = prepare_out(g) / "steady.json";
  json j = to_json(r);
  j["derived"] = to_json(d);
  write_text(path, j.dump(2) + "\n");
  write_manifest(path, std::move(manifest));
  return 0;
}

struct EvolveOptions {
  double t_end = 2000.0;
  std::size_t points = 400;
  double t_min = 1e-2;
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  bool stop_when_converged = false;
  std::string mode = "full";
};

int cmd_evolve(const GlobalOptions& g, const EvolveOptions& o, RunManifest manifest,
               std::ostream& out) {
  if (o.mode == "steady") return cmd_steady(g, std::move(manifest), out);
  const RunConfig cfg = resolve_config(g);
  manifest.config = cfg;
  manifest.options = {{"t_end", o.t_end},       {"points", o.points},
                      {"t_min", o.t_min},       {"rel_tol", o.rel_tol},
                      {"abs_tol", o.abs_tol},   {"stop_when_converged", o.stop_when_converged}};
  const DerivedParams d = derive(cfg.params, cfg.consts);

  IntegratorConfig ic;
  ic.t_end = o.t_end;
  ic.rel_tol = o.rel_tol;
  ic.abs_tol = o.abs_tol;
  ic.stop_when_converged = o.stop_when_converged;
  ic.output_grid = default_output_grid(o.t_end, o.points, o.t_min);
  const Trajectory traj = evolve_modes(d, ic);

  const fs::path path = prepare_out(g) / "trajectory.csv";
  write_table(path, trajectory_table_with_diagnostics(traj, d.epsilon));
  write_manifest(path, std::move(manifest));

  const auto& last = traj.samples.back();
  out << "Trajectory: " << traj.samples.size() << " samples to t = " << last.t << " s -> "
      << path.string() << "\n"
      << "  V+ final (qq, qp, pp)  " << sci(last.plus.qq) << "  " << sci(last.plus.qp) << "  "
      << sci(last.plus.pp) << "\n"
      << "  E_N final (raw)        "
      << sci(log_negativity(combine(last.plus, last.minus, beam_splitter(d.epsilon))).raw) << "\n"
      << "  converged              "
      << (traj.converged ? "at t = " + sci(*traj.converged_at) + " s" : std::string("no")) << "\n";
  if (traj.uncertainty_violations > 0) {
    out << "  warning: " << traj.uncertainty_violations
        << " samples with det V < 1 (min det " << sci(traj.min_det) << ")\n";
  }
  return 0;
}

int cmd_figure(const GlobalOptions& g, const std::string& name, const EvolveOptions& o,
               RunManifest manifest, std::ostream& out) {
  const Figure fig = parse_figure(name);
  FigureOptions fo;
  fo.config = resolve_config(g);
  fo.t_end = o.t_end;
  fo.points = o.points;
  fo.t_min = o.t_min;
  fo.rel_tol = o.rel_tol;
  fo.abs_tol = o.abs_tol;
  manifest.config = fo.config;
  manifest.options = {{"figure", name},   {"t_end", fo.t_end},     {"points", fo.points},
                      {"t_min", fo.t_min}, {"rel_tol", fo.rel_tol}, {"abs_tol", fo.abs_tol}};
  const CsvTable table = figure_data(fig, fo);
  const fs::path path = prepare_out(g) / (name + ".csv");
  write_table(path, table);
  write_manifest(path, std::move(manifest));
  out << name << ": " << table.rows.size() << " rows -> " << path.string() << "\n";
  return 0;
}

int cmd_sweep(const GlobalOptions& g, const std::string& spec_path, unsigned workers,
              RunManifest manifest, std::ostream& out) {
  SweepSpec spec = load_sweep_spec(spec_path);
  if (workers > 0) spec.workers = workers;
  if (g.strict_paper_moments) spec.moments = MomentConvention::strict_paper;
  manifest.config = {spec.base, spec.consts};
  manifest.options = {{"spec_file", spec_path}, {"spec", sweep_spec_to_json(spec)}};

  const SweepResult result = run_sweep(spec);
  const fs::path dir = prepare_out(g);
  {
    std::ofstream os(dir / "sweep.csv");
    if (!os) throw Error(Errc::Config, "cannot write sweep.csv");
    write_sweep_csv(os, result);
  }
  write_manifest(dir / "sweep.csv", manifest);
  write_text(dir / "sweep.json", to_json(result).dump(2) + "\n");
  write_manifest(dir / "sweep.json", std::move(manifest));

  std::size_t failed = 0;
  for (const auto& row : result.rows) failed += row.ok ? 0 : 1;
  out << "Sweep: " << result.rows.size() << " points, " << failed << " failed -> "
      << (dir / "sweep.csv").string() << "\n";
  return 0;
}

struct BudgetOptions {
  double target_snr = 1.0;
  double t_meas_factor = 1.0;
  std::size_t mc_samples = 0;
};

int cmd_budget(const GlobalOptions& g, const BudgetOptions& o, RunManifest manifest,
               std::ostream& out, std::ostream& err) {
  const RunConfig cfg = resolve_config(g);
  manifest.config = cfg;
  const MomentConvention conv =
      g.strict_paper_moments ? MomentConvention::strict_paper : MomentConvention::symmetric;
  manifest.options = {{"target_snr", o.target_snr},
                      {"t_meas_factor", o.t_meas_factor},
                      {"moments", g.strict_paper_moments ? "strict_paper" : "symmetric"},
                      {"mc_samples", o.mc_samples},
                      {"seed", g.seed}};
  const DerivedParams d = derive(cfg.params, cfg.consts);

  BudgetReport r;
  try {
    r = budget_at_steady_state(d, o.target_snr, conv, o.t_meas_factor);
  } catch (const Error& e) {
    if (e.code() == Errc::NotEntangled) {
      const Criterion c = entanglement_criterion(d);
      err << "not entangled in the steady state; criterion margin "
          << fmt("%.4f", c.margin) << " (needs > 1)\n";
    }
    throw;
  }
  const SnrBudget& b = r.budget;
  out << "Measurement budget (target S/N = " << o.target_snr << ", moments "
      << (g.strict_paper_moments ? "strict-paper" : "symmetric") << ")\n"
      << "  E_N (steady)          " << sci(b.en) << "\n"
      << "  <dE_N^2>              " << sci(b.var_en) << "\n"
      << "  N repetitions         " << b.n_meas << "\n"
      << "  t_meas [s]            " << sci(b.t_meas) << "\n"
      << "  tau [s]               " << sci(b.tau) << "\n"
      << "  criterion margin      " << fmt("%.4f", r.criterion_margin) << "\n"
      << "  E_N small-coupling    " << sci(en_smallcoupling(d)) << "\n";

  json j = to_json(b);
  j["criterion_margin"] = r.criterion_margin;
  j["gradient"] = {{"dVqq_plus", r.gradient.plus.qq},   {"dVqp_plus", r.gradient.plus.qp},
                   {"dVpp_plus", r.gradient.plus.pp},   {"dVqq_minus", r.gradient.minus.qq},
                   {"dVqp_minus", r.gradient.minus.qp}, {"dVpp_minus", r.gradient.minus.pp}};

  if (o.mc_samples > 0) {
    out << "Monte-Carlo moment check (" << o.mc_samples << " samples, seed " << g.seed << ")\n";
    json mc = json::array();
    for (const auto& [label, v] : {std::pair{"plus", r.v_plus}, std::pair{"minus", r.v_minus}}) {
      const MomentMatrix m = covariance_moment_matrix(v, conv);
      const MomentEstimate e = sample_moments(v, o.mc_samples, g.seed);
      const std::array<std::tuple<const char*, double, double, double>, 6> rows{{
          {"qq_qq", m.qq_qq, e.mean.qq_qq, e.std_error.qq_qq},
          {"qp_qp", m.qp_qp, e.mean.qp_qp, e.std_error.qp_qp},
          {"pp_pp", m.pp_pp, e.mean.pp_pp, e.std_error.pp_pp},
          {"qq_qp", m.qq_qp, e.mean.qq_qp, e.std_error.qq_qp},
          {"qq_pp", m.qq_pp, e.mean.qq_pp, e.std_error.qq_pp},
          {"pp_qp", m.pp_qp, e.mean.pp_qp, e.std_error.pp_qp},
      }};
      for (const auto& [name, formula, mean, se] : rows) {
        const double z = (mean - formula) / se;
        out << "  " << label << " " << name << "  formula " << sci(formula) << "  sampled "
            << sci(mean) << " +- " << sci(se) << "  (" << fmt("%+.2f", z) << " se)\n";
        mc.push_back({{"mode", label}, {"moment", name}, {"formula", formula},
                      {"sampled", mean}, {"std_error", se}});
      }
    }
    j["monte_carlo"] = mc;
  }

  const fs::path path = prepare_out(g) / "budget.json";
  write_text(path, j.dump(2) + "\n");
  write_manifest(path, std::move(manifest));
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"giesim: gravity-induced entanglement of Kalman-filtered optomechanical mirrors"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config_path, "JSON parameter file (missing keys use defaults)");
  app.add_option("--out", g.out_dir, "Output directory")->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for Monte-Carlo checks")->capture_default_str();
  app.add_flag("--strict-paper-moments", g.strict_paper_moments,
               "Use <dV_pp^2> = 2 V_pp instead of 2 V_pp^2");

  EvolveOptions evo;
  const auto add_grid_options = [&evo](CLI::App* sub) {
    sub->add_option("--t-end", evo.t_end, "Final time [s]")->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--points", evo.points, "Log-spaced output samples")->capture_default_str();
    sub->add_option("--t-min", evo.t_min, "First log-grid sample [s]")->capture_default_str();
    sub->add_option("--rel-tol", evo.rel_tol, "Relative tolerance")->capture_default_str();
    sub->add_option("--abs-tol", evo.abs_tol, "Absolute tolerance")->capture_default_str();
  };

  CLI::App* evolve = app.add_subcommand("evolve", "Integrate the Riccati equation");
  add_grid_options(evolve);
  evolve->add_option("--mode", evo.mode, "full | steady")
      ->check(CLI::IsMember({"full", "steady"}))->capture_default_str();
  evolve->add_flag("--stop-when-converged", evo.stop_when_converged);

  CLI::App* steady = app.add_subcommand("steady", "Closed-form steady state and criterion");

  std::string figure_name_arg;
  CLI::App* figure = app.add_subcommand("figure", "Emit figure data (fig2, fig3, fig4)");
  figure->add_option("name", figure_name_arg, "fig2 | fig3 | fig4")->required();
  add_grid_options(figure);

  std::string spec_path;
  unsigned workers = 0;
  CLI::App* sweep = app.add_subcommand("sweep", "Run a parameter sweep from a JSON spec");
  sweep->add_option("spec", spec_path, "Sweep spec file")->required();
  sweep->add_option("--workers", workers, "Worker threads (overrides the spec)");

  BudgetOptions bo;
  CLI::App* budget = app.add_subcommand("budget", "Repetitions and total time for a target S/N");
  budget->add_option("--target-snr", bo.target_snr)->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  budget->add_option("--t-meas-factor", bo.t_meas_factor, "t_meas = factor * kappa / g+^2")
      ->capture_default_str();
  budget->add_option("--mc-samples", bo.mc_samples, "Monte-Carlo moment check sample count")
      ->capture_default_str();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  RunManifest manifest;
  manifest.argv = std::vector<std::string>(args.begin(), args.end());
  manifest.started_utc = utc_timestamp();

  try {
    if (*evolve) {
      manifest.command = "evolve";
      return cmd_evolve(g, evo, std::move(manifest), out);
    }
    if (*steady) {
      manifest.command = "steady";
      return cmd_steady(g, std::move(manifest), out);
    }
    if (*figure) {
      manifest.command = "figure";
      return cmd_figure(g, figure_name_arg, evo, std::move(manifest), out);
    }
    if (*sweep) {
      manifest.command = "sweep";
      return cmd_sweep(g, spec_path, workers, std::move(manifest), out);
    }
    if (*budget) {
      manifest.command = "budget";
      return cmd_budget(g, bo, std::move(manifest), out, err);
    }
  } catch (const Error& e) {
    err << "giesim: " << e.what() << "\n";
    return exit_code_of(e.code());
  } catch (const std::exception& e) {
    err << "giesim: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace gie::cli

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

// Acceptance gate: one PASS/FAIL line per criterion, tolerances pinned below.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "giesim/figures.hpp"
#include "giesim/io.hpp"
#include "giesim/metrology.hpp"
#include "giesim/riccati.hpp"
#include "giesim/steady_state.hpp"
#include "giesim/sweep.hpp"
#include "oracles.hpp"

using namespace gie;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* spec, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, spec, args...);
  return buf;
}

const DerivedParams& reference_point() {
  static const DerivedParams d = derive(ExperimentParams::reference());
  return d;
}

// 1. integrated V at 5000 s vs closed form, and the convergence time
Outcome steady_fixed_point() {
  constexpr double kRelTol = 1e-4;
  constexpr double kConvLo = 490.0, kConvHi = 910.0;
  IntegratorConfig cfg;
  cfg.t_end = 5000.0;
  cfg.output_grid = default_output_grid(cfg.t_end);
  const Trajectory traj = evolve_modes(reference_point(), cfg);
  const auto& last = traj.samples.back();
  double worst = 0.0;
  for (Mode m : {Mode::plus, Mode::minus}) {
    const CovMat2 closed = steady_covariance(reference_point(), m);
    const CovMat2 alg = oracle::steady_by_substitution(
        reference_point().omega(m), reference_point().params.gamma_m, reference_point().lambda(m), reference_point().n_bar(m));
    const CovMat2& got = m == Mode::plus ? last.plus : last.minus;
    worst = std::max({worst, oracle::rel_err(got.qq, closed.qq), oracle::rel_err(got.qp, closed.qp),
                      oracle::rel_err(got.pp, closed.pp), oracle::cov_rel_err(closed, alg)});
  }
  const double at = traj.converged_at.value_or(NAN);
  const bool pass = last.t == 5000.0 && worst < kRelTol && traj.converged && at >= kConvLo &&
                    at <= kConvHi;
  return {pass, fmt("max rel err at 5000 s %.2e (< %.0e); converged at %.0f s (in [%.0f, %.0f])",
                    worst, kRelTol, at, kConvLo, kConvHi)};
}

// 2. early and intermediate regime formulas inside their windows
Outcome regime_attractors() {
  constexpr double kEarlyTol = 0.20, kInterTol = 0.25;
  IntegratorConfig cfg;
  cfg.t_end = 300.0;
  cfg.output_grid = {0.0};
  for (int k = 0; k <= 200; ++k) cfg.output_grid.push_back(std::pow(10.0, std::log10(300.0) * k / 200.0));
  cfg.output_grid.back() = 300.0;
  const Trajectory traj = evolve_modes(reference_point(), cfg);
  const DerivedParams& d = reference_point();
  double early = 0.0, inter_qq = 0.0, inter_qp = 0.0, inter_pp = 0.0;
  for (const auto& s : traj.samples) {
    if (s.t >= 1.0 && s.t <= 10.0) {
      // kappa / (16 t g+^2)
      const double want = d.params.kappa / (16.0 * s.t * d.g_plus * d.g_plus);
      early = std::max(early, oracle::rel_err(s.plus.qq, want));
    }
    if (s.t >= 30.0 && s.t <= 300.0) {
      const double g2 = d.g_plus * d.g_plus, k = d.params.kappa, om = d.Omega_plus, t = s.t;
      inter_qq = std::max(inter_qq, oracle::rel_err(s.plus.qq, k / (4 * t * g2)));
      inter_qp = std::max(inter_qp, oracle::rel_err(s.plus.qp, 3 * k / (8 * t * t * g2 * om)));
      inter_pp = std::max(inter_pp,
                          oracle::rel_err(s.plus.pp, 3 * k / (8 * t * t * t * g2 * om * om)));
    }
  }
  const bool pass = early < kEarlyTol && std::max({inter_qq, inter_qp, inter_pp}) < kInterTol;
  return {pass, fmt("early Vqq max dev %.1f%% (< %.0f%%); intermediate max dev qq %.1f%%, "
                    "qp %.1f%%, pp %.1f%% (< %.0f%%)",
                    100 * early, 100 * kEarlyTol, 100 * inter_qq, 100 * inter_qp, 100 * inter_pp,
                    100 * kInterTol)};
}

// 3. kappa sweep: positive plateau, onset before 1.8e3 s, sooner for smaller kappa
Outcome entanglement_onset() {
  constexpr double kTen = 1.8e3;
  SweepSpec spec;
  spec.axes = {{"kappa_over_2pi_Hz", {1e6, 1e7, 1e8}}};
  spec.pipeline = Pipeline::full_evolution;
  spec.integrator.t_end = 2000.0;
  spec.integrator.output_grid = default_output_grid(2000.0);
  spec.workers = 3;
  const SweepResult r = run_sweep(spec);
  bool pass = r.rows.size() == 3;
  std::string onsets;
  std::vector<double> t;
  for (const auto& row : r.rows) {
    if (!row.ok || !row.trajectory || !row.trajectory->onset_time) {
      pass = false;
      onsets += " (no onset)";
      continue;
    }
    const double raw = row.steady->en.raw;
    t.push_back(*row.trajectory->onset_time);
    pass = pass && raw > 0.0 && t.back() < kTen;
    onsets += fmt(" %.3g s (E_N %.2e)", t.back(), raw);
  }
  pass = pass && t.size() == 3 && t[0] < t[1] && t[1] < t[2];
  return {pass, "onset for kappa/2pi = 1e6, 1e7, 1e8 Hz:" + onsets +
                    "; required all E_N > 0, onset < 1.8e3 s, increasing with kappa"};
}

// 4. small-coupling analytic value vs the full pipeline
Outcome analytic_vs_numeric() {
  constexpr double kTol = 0.25;
  const DerivedParams& d = reference_point();
  const double x = d.params.kappa * d.params.gamma_m / (16 * d.g_plus * d.g_plus) *
                   (d.params.Omega * d.epsilon / (std::sqrt(2.0) * d.params.gamma_m) -
                    4 * d.n_th_plus);
  const double analytic = -0.5 * std::log2(1 - x);
  const CovMat4 v = combine(steady_covariance(d, Mode::plus), steady_covariance(d, Mode::minus),
                            beam_splitter(d.epsilon));
  const double numeric = oracle::log_negativity_pt(v.matrix());
  const double lib_gap = std::abs(analytic_negativity(d) - analytic) +
                         std::abs(log_negativity(v).raw - numeric);
  const double rel = std::abs(analytic - numeric) / numeric;
  return {rel < kTol && lib_gap < 1e-12,
          fmt("analytic %.5f vs full pipeline %.5f: rel diff %.1f%% (< %.0f%%)", analytic, numeric,
              100 * rel, 100 * kTol)};
}

// 5. sign of the full-pipeline E_N vs the criterion, away from the threshold
Outcome criterion_consistency() {
  constexpr int kDraws = 1000;
  std::mt19937_64 rng(20240601);
  int mismatches = 0, entangled = 0;
  for (int k = 0; k < kDraws; ++k) {
    const DerivedParams d = oracle::draw_in_regime(rng);
    const double margin = oracle::criterion_margin(d);
    const double en = log_negativity(combine(steady_covariance(d, Mode::plus),
                                             steady_covariance(d, Mode::minus),
                                             beam_splitter(d.epsilon)))
                          .raw;
    entangled += en > 0.0;
    mismatches += (en > 0.0) != (margin > 1.0);
  }
  return {mismatches == 0, fmt("%d/%d in-regime draws disagree (%d entangled); required 0",
                               mismatches, kDraws, entangled)};
}

// 6. measurement budget
Outcome budget_reproduction() {
  constexpr double kQuotedTau = 2e6, kFactor = 3.0;
  const BudgetReport r = budget_at_steady_state(reference_point(), 1.0);
  const double tau = r.budget.tau;
  const double n_check = std::ceil(r.budget.var_en / (r.budget.en * r.budget.en));
  const double t_check = reference_point().params.kappa / (reference_point().g_plus * reference_point().g_plus);
  const bool consistent = n_check == static_cast<double>(r.budget.n_meas) &&
                          oracle::rel_err(r.budget.tau, n_check * t_check) < 1e-12;
  return {consistent && tau >= kQuotedTau / kFactor && tau <= kQuotedTau * kFactor,
          fmt("tau = %.3e s (N = %llu, t_meas = %.1f s); required within x%.0f of %.0e s", tau,
              static_cast<unsigned long long>(r.budget.n_meas), r.budget.t_meas, kFactor,
              kQuotedTau)};
}

// 7. pi / (Omega eps)
Outcome t_en_reproduction() {
  constexpr double kQuoted = 1.8e3, kTol = 0.03;
  const ExperimentParams p = ExperimentParams::reference();
  const double eps = 4 * PhysicalConstants{}.G * p.rho * p.Lambda / (p.Omega * p.Omega);
  const double t_en = std::numbers::pi / (p.Omega * eps);
  const double rel = std::abs(t_en - kQuoted) / kQuoted;
  return {rel < kTol && oracle::rel_err(t_entangle(reference_point()), t_en) < 1e-12,
          fmt("t_en = %.1f s, %.1f%% from 1.8e3 s (< %.0f%%)", t_en, 100 * rel, 100 * kTol)};
}

// 8. oracle suites
Outcome oracle_suites() {
  constexpr double kEnTol = 1e-9, kSigmas = 3.0, kOdeTol = 1e-6;
  constexpr std::size_t kSamples = 1'000'000;

  std::mt19937_64 rng(8);
  double en_worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Eigen::Matrix4d m = oracle::random_gaussian_state(rng);
    en_worst = std::max(en_worst, std::abs(log_negativity(CovMat4::from_matrix(m)).raw -
                                           oracle::log_negativity_pt(m)));
  }

  double z_worst = 0.0;
  std::vector<CovMat2> covs{steady_covariance(reference_point(), Mode::plus),
                            steady_covariance(reference_point(), Mode::minus)};
  while (covs.size() < 10) covs.push_back(oracle::random_cov2(rng));
  std::uint64_t seed = 20240601;
  for (const CovMat2& v : covs) {
    const MomentMatrix f = covariance_moment_matrix(v);
    const MomentEstimate e = sample_moments(v, kSamples, seed++, 4);
    const std::array<double, 6> want{f.qq_qq, f.qp_qp, f.pp_pp, f.qq_qp, f.qq_pp, f.pp_qp};
    const std::array<double, 6> got{e.mean.qq_qq, e.mean.qp_qp, e.mean.pp_pp,
                                    e.mean.qq_qp, e.mean.qq_pp, e.mean.pp_qp};
    const std::array<double, 6> se{e.std_error.qq_qq, e.std_error.qp_qp, e.std_error.pp_pp,
                                   e.std_error.qq_qp, e.std_error.qq_pp, e.std_error.pp_qp};
    for (int k = 0; k < 6; ++k) z_worst = std::max(z_worst, std::abs(got[k] - want[k]) / se[k]);
  }

  IntegratorConfig cfg;
  cfg.output_grid = default_output_grid(cfg.t_end);
  const Trajectory traj = evolve_modes(reference_point(), cfg);
  const auto [v0p, v0m] = initial_covariance(reference_point());
  const auto ref_p = oracle::rk4_reference(reference_point(), Mode::plus, v0p, cfg.output_grid);
  const auto ref_m = oracle::rk4_reference(reference_point(), Mode::minus, v0m, cfg.output_grid);
  double ode_worst = 0.0;
  for (std::size_t k = 0; k < traj.samples.size(); ++k) {
    const auto dev = [](const CovMat2& a, const CovMat2& b) {
      return (a.matrix() - b.matrix()).norm() / b.matrix().norm();
    };
    ode_worst = std::max({ode_worst, dev(traj.samples[k].plus, ref_p[k]),
                          dev(traj.samples[k].minus, ref_m[k])});
  }
  const bool pass = en_worst < kEnTol && z_worst < kSigmas && ode_worst < kOdeTol &&
                    traj.samples.size() == cfg.output_grid.size();
  return {pass, fmt("(a) E_N vs PT oracle max |diff| %.1e (< %.0e); (b) moments max %.2f SE "
                    "(< %.0f) at M = 1e6; (c) adaptive vs RK4 h=1e-3 max rel %.1e (< %.0e)",
                    en_worst, kEnTol, z_worst, kSigmas, ode_worst, kOdeTol)};
}

// 9. sweep determinism across workers, golden figure data
Outcome determinism() {
  SweepSpec spec;
  spec.axes = {{"kappa_over_2pi_Hz", {1e6, 1e7, 1e8}}, {"T_K", {0.5, 1.0, 2.0}}};
  spec.pipeline = Pipeline::full_evolution;
  spec.integrator.output_grid = default_output_grid(spec.integrator.t_end, 100);
  const auto render = [&](unsigned workers) {
    spec.workers = workers;
    std::ostringstream os;
    write_sweep_csv(os, run_sweep(spec));
    return os.str();
  };
  const std::string one = render(1);
  const bool sweeps_equal = one == render(3) && one == render(8);

  const std::filesystem::path golden = GIESIM_GOLDEN_DIR;
  double worst = 0.0;
  bool shapes = true;
  for (Figure fig : {Figure::fig2, Figure::fig3, Figure::fig4}) {
    const CsvTable got = figure_data(fig);
    const CsvTable want = read_csv(golden / (std::string(figure_name(fig)) + ".csv"));
    if (got.header != want.header || got.rows.size() != want.rows.size()) {
      shapes = false;
      continue;
    }
    for (std::size_t c = 0; c < want.header.size(); ++c) {
      double scale = 0.0;
      for (const auto& row : want.rows) scale = std::max(scale, std::abs(row[c]));
      for (std::size_t r = 0; r < want.rows.size(); ++r) {
        const double b = want.rows[r][c];
        worst = std::max(worst, std::abs(got.rows[r][c] - b) / std::max(std::abs(b), 1e-6 * scale));
      }
    }
  }
  return {sweeps_equal && shapes && worst < 1e-4,
          fmt("sweep CSV identical for 1/3/8 workers: %s; golden figures max rel dev %.1e (< 1e-4)",
              sweeps_equal ? "yes" : "no", worst)};
}

struct Gate {
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"giesim acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "Run a single criterion (1-9)")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Gate> criteria{
      {"steady-state fixed point", 10, steady_fixed_point},
      {"regime attractors", 10, regime_attractors},
      {"entanglement onset", 60, entanglement_onset},
      {"analytic vs numeric negativity", 5, analytic_vs_numeric},
      {"criterion consistency", 60, criterion_consistency},
      {"budget reproduction", 5, budget_reproduction},
      {"t_en reproduction", 1, t_en_reproduction},
      {"oracle suites", 120, oracle_suites},
      {"determinism", 120, determinism},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<int>(i) + 1 != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < criteria[i].budget_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("criterion %zu [%s] %s: %s; runtime %.2f s (< %.0f s)\n", i + 1,
                pass ? "PASS" : "FAIL", criteria[i].name, o.detail.c_str(), secs,
                criteria[i].budget_s);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}

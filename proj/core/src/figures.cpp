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

#include "giesim/figures.hpp"

#include <cstdio>
#include <future>
#include <string>
#include <vector>

#include "giesim/errors.hpp"

namespace gie {

namespace {

IntegratorConfig integrator_for(const FigureOptions& o) {
  IntegratorConfig cfg;
  cfg.t_end = o.t_end;
  cfg.rel_tol = o.rel_tol;
  cfg.abs_tol = o.abs_tol;
  // Log axes: drop the t = 0 sample.
  cfg.output_grid = default_output_grid(o.t_end, o.points, o.t_min);
  if (cfg.output_grid.size() > 1) cfg.output_grid.erase(cfg.output_grid.begin());
  return cfg;
}

std::string kappa_label(double hz) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.0e", hz);
  std::string s(buf);  // e.g. "1e+08"
  const auto plus = s.find("e+");
  if (plus != std::string::npos) {
    std::string exp = s.substr(plus + 2);
    while (exp.size() > 1 && exp.front() == '0') exp.erase(exp.begin());
    s = s.substr(0, plus) + "e" + exp;
  }
  return "kappa_" + s + "Hz";
}

CsvTable fig2(const FigureOptions& o) {
  const DerivedParams d = derive(o.config.params, o.config.consts);
  const Trajectory traj = evolve_modes(d, integrator_for(o));
  CsvTable t;
  t.header = {"t_s", "Vqq_plus", "Vqp_plus", "Vpp_plus"};
  for (const auto& s : traj.samples) t.rows.push_back({s.t, s.plus.qq, s.plus.qp, s.plus.pp});
  return t;
}

CsvTable fig3(const FigureOptions& o) {
  const IntegratorConfig cfg = integrator_for(o);
  std::vector<std::future<std::vector<LogNegativity>>> runs;
  for (double hz : kFig3KappaHz) {
    ExperimentParams p = o.config.params;
    p.kappa = from_hz(hz);
    runs.push_back(std::async(std::launch::async, [p, &o, &cfg] {
      const DerivedParams d = derive(p, o.config.consts);
      return negativity_series(evolve_modes(d, cfg), d.epsilon);
    }));
  }
  std::vector<std::vector<LogNegativity>> series;
  for (auto& r : runs) series.push_back(r.get());

  CsvTable t;
  t.header = {"t_s"};
  for (double hz : kFig3KappaHz) t.header.push_back("EN_" + kappa_label(hz));
  for (double hz : kFig3KappaHz) t.header.push_back("EN_raw_" + kappa_label(hz));
  for (std::size_t i = 0; i < cfg.output_grid.size(); ++i) {
    std::vector<double> row{cfg.output_grid[i]};
    for (const auto& s : series) row.push_back(s.at(i).clamped);
    for (const auto& s : series) row.push_back(s.at(i).raw);
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable fig4(const FigureOptions& o) {
  const DerivedParams d = derive(o.config.params, o.config.consts);
  const Trajectory traj = evolve_modes(d, integrator_for(o));
  CsvTable t;
  t.header = {"t_s",           "purity_plus",      "squeeze_angle_plus",     "eig_ratio_plus",
              "purity_diff_x100", "squeeze_angle_diff_x10", "eig_ratio_diff_x10"};
  for (const auto& s : traj.samples) {
    const double pur_p = purity(s.plus);
    const double pur_m = purity(s.minus);
    const auto sq_p = squeezing_diagnostics(s.plus);
    const auto sq_m = squeezing_diagnostics(s.minus);
    t.rows.push_back({s.t, pur_p, sq_p.angle, sq_p.eig_ratio, 100.0 * (pur_p - pur_m),
                      10.0 * (sq_p.angle - sq_m.angle), 10.0 * (sq_p.eig_ratio - sq_m.eig_ratio)});
  }
  return t;
}

}  // namespace

Figure parse_figure(std::string_view name) {
  if (name == "fig2") return Figure::fig2;
  if (name == "fig3") return Figure::fig3;
  if (name == "fig4") return Figure::fig4;
  throw Error(Errc::Config, "unknown figure '" + std::string(name) + "' (fig2, fig3, fig4)");
}

std::string_view figure_name(Figure fig) {
  switch (fig) {
    case Figure::fig2: return "fig2";
    case Figure::fig3: return "fig3";
    case Figure::fig4: return "fig4";
  }
  return "";
}

CsvTable figure_data(Figure fig, const FigureOptions& options) {
  switch (fig) {
    case Figure::fig2: return fig2(options);
    case Figure::fig3: return fig3(options);
    case Figure::fig4: return fig4(options);
  }
  throw Error(Errc::Config, "unknown figure");
}

}  // namespace gie

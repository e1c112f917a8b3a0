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

#include <array>
#include <string_view>

#include "giesim/io.hpp"

namespace gie {

enum class Figure { fig2, fig3, fig4 };

/// Throws Config for anything but "fig2", "fig3", "fig4".
Figure parse_figure(std::string_view name);
std::string_view figure_name(Figure fig);

struct FigureOptions {
  RunConfig config;
  double t_end = 2000.0;
  std::size_t points = 400;
  double t_min = 1e-2;
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
};

/// kappa / 2pi values (Hz) of the negativity figure.
inline constexpr std::array<double, 3> kFig3KappaHz{1e8, 1e7, 1e6};

/// fig2: t_s, Vqq_plus, Vqp_plus, Vpp_plus on a log grid.
/// fig3: t_s, EN_kappa_1e8Hz, EN_kappa_1e7Hz, EN_kappa_1e6Hz and the raw
///       (unclamped) EN_raw_kappa_* columns.
/// fig4: t_s, purity_plus, squeeze_angle_plus, eig_ratio_plus and the
///       common-minus-differential differences purity_diff_x100,
///       squeeze_angle_diff_x10, eig_ratio_diff_x10.
CsvTable figure_data(Figure fig, const FigureOptions& options = {});

}  // namespace gie

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


#include <benchmark/benchmark.h>

#include "giesim/covariance.hpp"
#include "giesim/metrology.hpp"
#include "giesim/riccati.hpp"
#include "giesim/steady_state.hpp"
#include "giesim/sweep.hpp"

namespace {

const gie::DerivedParams& reference() {
  static const gie::DerivedParams d = gie::derive(gie::ExperimentParams::reference());
  return d;
}

void BM_EvolveModes(benchmark::State& state) {
  gie::IntegratorConfig cfg;
  cfg.t_end = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gie::evolve_modes(reference(), cfg));
}
BENCHMARK(BM_EvolveModes)->Arg(100)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_SteadyReport(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(gie::steady_report(reference()));
}
BENCHMARK(BM_SteadyReport);

void BM_LogNegativity(benchmark::State& state) {
  const auto& d = reference();
  const gie::CovMat4 v = gie::combine(gie::steady_covariance(d, gie::Mode::plus),
                                      gie::steady_covariance(d, gie::Mode::minus),
                                      gie::beam_splitter(d.epsilon));
  for (auto _ : state) benchmark::DoNotOptimize(gie::log_negativity(v));
}
BENCHMARK(BM_LogNegativity);

void BM_Gradient(benchmark::State& state) {
  const auto& d = reference();
  const gie::CovMat2 vp = gie::steady_covariance(d, gie::Mode::plus);
  const gie::CovMat2 vm = gie::steady_covariance(d, gie::Mode::minus);
  for (auto _ : state) benchmark::DoNotOptimize(gie::negativity_gradient(vp, vm, d.epsilon));
}
BENCHMARK(BM_Gradient);

void BM_SteadySweep(benchmark::State& state) {
  gie::SweepSpec spec;
  spec.axes.push_back(gie::SweepAxis::logspace("kappa_over_2pi_Hz", 1e6, 1e9, 64));
  spec.workers = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gie::run_sweep(spec));
}
BENCHMARK(BM_SteadySweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

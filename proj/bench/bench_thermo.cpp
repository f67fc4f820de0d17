// Copyright 2026 The strongtherm Authors
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

// Serial reference loops against the OpenMP kernels.

#include <benchmark/benchmark.h>

#include "strongtherm/spinboson.hpp"
#include "strongtherm/thermo.hpp"

using namespace strongtherm;

namespace {

ExecutionPolicy policy_of(const benchmark::State& state) {
  return state.range(0) == 0 ? ExecutionPolicy::Serial : ExecutionPolicy::Parallel;
}

void BM_PropagatorSweep(benchmark::State& state) {
  const spinboson::ModelConfig cfg;
  const LiouvillianExponential expl(build_liouvillian(spinboson::davies_generator(cfg)));
  const auto grid = thermo::linear_grid(2000.0, static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(propagator_sweep(expl, grid, policy_of(state)));
  state.SetItemsProcessed(state.iterations() * state.range(1));
}

void BM_ThermoStatic(benchmark::State& state) {
  const spinboson::ModelConfig cfg;
  const DensityMatrix rho0(HermitianMatrix::diagonal(Eigen::Vector2d(0.0, 1.0)));
  const auto grid = thermo::linear_grid(2000.0, static_cast<std::size_t>(state.range(1)));
  thermo::ThermoOptions opts;
  opts.policy = policy_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(thermo::thermo_static(cfg, rho0, grid, opts));
  state.SetItemsProcessed(state.iterations() * state.range(1));
}

void BM_ThermoDriven(benchmark::State& state) {
  const spinboson::ModelConfig cfg;
  const DensityMatrix rho0(HermitianMatrix::diagonal(Eigen::Vector2d(0.0, 1.0)));
  const auto grid = thermo::linear_grid(500.0, static_cast<std::size_t>(state.range(1)));
  const thermo::DrivenProtocol ramp = thermo::DrivenProtocol::smooth_ramp(
      HermitianMatrix(0.5 * pauli::sigma_z()), HermitianMatrix(0.55 * pauli::sigma_z()), 500.0);
  thermo::ThermoOptions opts;
  opts.policy = policy_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(thermo::thermo_driven(cfg, ramp, rho0, grid, opts));
  state.SetItemsProcessed(state.iterations() * state.range(1));
}

}  // namespace

BENCHMARK(BM_PropagatorSweep)->ArgNames({"parallel", "points"})->ArgsProduct({{0, 1}, {8001}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ThermoStatic)->ArgNames({"parallel", "points"})->ArgsProduct({{0, 1}, {8001}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ThermoDriven)->ArgNames({"parallel", "points"})->ArgsProduct({{0, 1}, {1001}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

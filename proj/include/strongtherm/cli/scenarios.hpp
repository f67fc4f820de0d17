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

#pragma once

#include <string>
#include <vector>

#include "strongtherm/cli/config.hpp"
#include "strongtherm/cli/csv.hpp"
#include "strongtherm/cli/svg.hpp"
#include "strongtherm/thermo.hpp"
#include "strongtherm/witness.hpp"

namespace strongtherm::cli {

DensityMatrix initial_density(const RunConfig& cfg, const spinboson::ModelConfig& model);

/// One static factorized trace per beta.
std::vector<thermo::ThermoTrace> fig1_traces(const RunConfig& cfg,
                                             const thermo::ThermoOptions& opts = {});

struct FigS1Row {
  double c = 0.0;
  double max_diff = 0.0;  // max_t |E_U - <H_S>|
};
std::vector<FigS1Row> figS1_rows(const RunConfig& cfg, const thermo::ThermoOptions& opts = {});
bool strictly_decreasing(const std::vector<FigS1Row>& rows);

struct MeanForceRun {
  thermo::ThermoTrace trace;
  std::vector<thermo::MeanForcePoint> star;
};
/// figS2 and figS3 share the computation.
std::vector<MeanForceRun> mean_force_runs(const RunConfig& cfg,
                                          const thermo::ThermoOptions& opts = {});

/// Pipeline chosen by the initial state and drive settings.
thermo::ThermoTrace custom_trace(const RunConfig& cfg, double beta,
                                 const thermo::ThermoOptions& opts = {});

/// The driving protocol of cfg.drive on the model's system Hamiltonian.
thermo::DrivenProtocol make_protocol(const RunConfig& cfg);

struct Artifacts {
  std::vector<std::pair<std::string, CsvTable>> tables;
  std::vector<std::pair<std::string, Chart>> charts;
  std::vector<std::string> summary;
};

/// Runs the configured scenario and assembles its files. Every trace passes
/// thermo::validate_trace before it is tabulated.
Artifacts run_scenario(const RunConfig& cfg, const thermo::ThermoOptions& opts = {});

/// Writes tables (and charts when cfg.emit_svg) under cfg.out_dir.
std::vector<std::string> write_artifacts(const RunConfig& cfg, const Artifacts& a);

}  // namespace strongtherm::cli

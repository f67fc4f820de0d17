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

// Run configuration for the scenario runner. Files are JSON with // and /* */
// comments; see configs/example.jsonc.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "strongtherm/qmatrix.hpp"
#include "strongtherm/spinboson.hpp"

namespace strongtherm::cli {

enum class Scenario { Fig1, FigS1, FigS2, FigS3, Custom, Witness };

Scenario parse_scenario(const std::string& name);
std::string scenario_name(Scenario s);

enum class InitialKind { Ground, Excited, Gibbs, Measured, Custom };

struct InitialState {
  InitialKind kind = InitialKind::Ground;
  ComplexMatrix basis;   // Measured: columns are the measurement basis
  ComplexMatrix matrix;  // Custom: 2x2 density matrix
};

struct TimeGrid {
  double t_max = 2.0;         // in units of 1/gamma_eff = c / gamma_plus
  std::size_t points = 8001;  // linear spacing
  bool log_spacing = false;   // 0 followed by per_decade points per decade from t_min
  double t_min = 1e-4;        // in units of 1/gamma_eff
  std::size_t per_decade = 400;
};

struct DriveSpec {
  bool enabled = false;
  bool from_equilibrium = false;
  bool smooth = true;          // sin^2 ramp, otherwise linear
  double omega_end = 1.1;      // system frequency at the end of the ramp
  double duration = 1.0;       // in units of 1/gamma_eff
};

struct RunConfig {
  Scenario scenario = Scenario::Fig1;
  spinboson::ModelConfig model;
  InitialState initial;
  std::vector<double> betas;
  std::vector<double> c_list;
  TimeGrid grid;
  DriveSpec drive;
  double witness_threshold = 1e-6;
  std::string out_dir = ".";
  bool emit_svg = false;
};

/// Scenario defaults: fig1 betas {0.1, 1, 10}; figS1 c in {1,2,4,8,16} at
/// beta = 1; figS2 betas {0.1, 1}; figS3 kappa = 0.95, betas {0.1, 0.5, 1},
/// Gibbs start.
RunConfig default_config(Scenario s);

/// Parses a config file over the defaults of the scenario it names (or of
/// fallback when it names none). Throws IoError / ConfigError.
RunConfig load_config(const std::string& path, Scenario fallback);
RunConfig parse_config(const std::string& text, Scenario fallback);

/// Throws ConfigError: t_max > 0, points >= 16, betas non-empty and positive,
/// c_list positive, model valid.
void validate(const RunConfig& cfg);

/// Physical grid for the model's c and gamma.
std::vector<double> physical_grid(const RunConfig& cfg, double c);

/// Comma-separated list of doubles.
std::vector<double> parse_list(const std::string& text);

}  // namespace strongtherm::cli

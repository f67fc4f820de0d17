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

// strongtherm: reproduce the figure scenarios and run custom configurations.
//
//   strongtherm fig1 --out results --svg
//   strongtherm figS1 --c-list 1,2,4,8,16
//   strongtherm custom --config configs/example.jsonc
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure, 4 I/O.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "strongtherm/cli/config.hpp"
#include "strongtherm/cli/scenarios.hpp"
#include "strongtherm/error.hpp"

namespace {

using namespace strongtherm;

struct Flags {
  std::string config;
  std::optional<std::string> out;
  bool svg = false;
  std::optional<std::size_t> points;
  std::optional<double> t_max;
  std::optional<std::string> betas;
  std::optional<std::string> c_list;
  bool serial = false;
};

int run(cli::Scenario scenario, const Flags& f) {
  cli::RunConfig cfg =
      f.config.empty() ? cli::default_config(scenario) : cli::load_config(f.config, scenario);
  cfg.scenario = scenario;
  if (f.out) cfg.out_dir = *f.out;
  if (f.svg) cfg.emit_svg = true;
  if (f.points) cfg.grid.points = *f.points;
  if (f.t_max) cfg.grid.t_max = *f.t_max;
  if (f.betas) cfg.betas = cli::parse_list(*f.betas);
  if (f.c_list) cfg.c_list = cli::parse_list(*f.c_list);

  thermo::ThermoOptions opts;
  if (f.serial) opts.policy = ExecutionPolicy::Serial;
  const cli::Artifacts art = cli::run_scenario(cfg, opts);
  for (const std::string& line : art.summary) std::cout << line << '\n';
  for (const std::string& path : cli::write_artifacts(cfg, art)) std::cout << "wrote " << path << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strong-coupling thermodynamics of an open qubit"};
  app.require_subcommand(1);
  Flags flags;
  std::optional<cli::Scenario> chosen;

  const std::pair<const char*, const char*> commands[] = {
      {"fig1", "internal energy and entropy production, ground-state start"},
      {"figS1", "max |E_U - <H_S>| against the weak-coupling scale c"},
      {"figS2", "E_U against <H_S> and the mean-force energy"},
      {"figS3", "mean-force entropy production from a product thermal start"},
      {"custom", "any configuration, all thermodynamic columns"},
      {"witness", "negative entropy-production intervals and divisibility scan"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", flags.config, "JSON config file (comments allowed)");
    sub->add_option("--out", flags.out, "output directory");
    sub->add_flag("--svg", flags.svg, "also write SVG charts");
    sub->add_option("--grid-points", flags.points, "number of time-grid points");
    sub->add_option("--t-max", flags.t_max, "final time in units of 1/gamma_eff");
    sub->add_option("--beta", flags.betas, "comma-separated inverse temperatures");
    sub->add_option("--c-list", flags.c_list, "comma-separated coupling scales c");
    sub->add_flag("--serial", flags.serial, "disable OpenMP parallel evaluation");
    const std::string n = name;
    sub->callback([&chosen, n] { chosen = cli::parse_scenario(n); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return run(*chosen, flags);
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 4;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}

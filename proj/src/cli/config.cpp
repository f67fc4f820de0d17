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

#include "strongtherm/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "strongtherm/error.hpp"
#include "strongtherm/thermo.hpp"

namespace strongtherm::cli {

namespace {

using json = nlohmann::json;

const std::pair<const char*, Scenario> kScenarioNames[] = {
    {"fig1", Scenario::Fig1},     {"figS1", Scenario::FigS1},   {"figS2", Scenario::FigS2},
    {"figS3", Scenario::FigS3},   {"custom", Scenario::Custom}, {"witness", Scenario::Witness}};

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

ComplexMatrix basis_from_angles(double theta, double phi) {
  const Complex ph = std::polar(1.0, phi);
  ComplexMatrix b(2, 2);
  b << std::cos(theta / 2), -std::conj(ph) * std::sin(theta / 2),
      ph * std::sin(theta / 2), std::cos(theta / 2);
  return b;
}

ComplexMatrix parse_basis(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "z") return ComplexMatrix::Identity(2, 2);
    if (s == "x") return basis_from_angles(M_PI / 2, 0.0);
    if (s == "y") return basis_from_angles(M_PI / 2, M_PI / 2);
    throw ConfigError("config: measurement basis must be \"x\", \"y\", \"z\" or {theta, phi}");
  }
  double theta = 0.0;
  double phi = 0.0;
  read(j, "theta", theta);
  read(j, "phi", phi);
  return basis_from_angles(theta, phi);
}

ComplexMatrix parse_matrix(const json& j) {
  const auto part = [](const json& m, const char* what) {
    if (!m.is_array() || m.size() != 2 || !m[0].is_array() || m[0].size() != 2 ||
        !m[1].is_array() || m[1].size() != 2)
      throw ConfigError(std::string("config: initial_state.") + what + " must be 2x2");
    Eigen::Matrix2d out;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) out(r, c) = m[r][c].get<double>();
    return out;
  };
  if (!j.contains("real")) throw ConfigError("config: custom initial state needs \"real\"");
  ComplexMatrix m = part(j.at("real"), "real").cast<Complex>();
  if (j.contains("imag")) m += Complex(0, 1) * part(j.at("imag"), "imag").cast<Complex>();
  return m;
}

InitialState parse_initial(const json& j) {
  InitialState s;
  std::string kind = "ground";
  read(j, "kind", kind);
  if (kind == "ground") {
    s.kind = InitialKind::Ground;
  } else if (kind == "excited") {
    s.kind = InitialKind::Excited;
  } else if (kind == "gibbs") {
    s.kind = InitialKind::Gibbs;
  } else if (kind == "measured") {
    s.kind = InitialKind::Measured;
    s.basis = parse_basis(j.contains("basis") ? j.at("basis") : json("z"));
  } else if (kind == "custom") {
    s.kind = InitialKind::Custom;
    s.matrix = parse_matrix(j);
  } else {
    throw ConfigError("config: unknown initial_state.kind '" + kind + "'");
  }
  return s;
}

}  // namespace

Scenario parse_scenario(const std::string& name) {
  for (const auto& [n, s] : kScenarioNames)
    if (name == n) return s;
  throw ConfigError("unknown scenario '" + name + "'");
}

std::string scenario_name(Scenario s) {
  for (const auto& [n, v] : kScenarioNames)
    if (v == s) return n;
  return "?";
}

RunConfig default_config(Scenario s) {
  RunConfig cfg;
  cfg.scenario = s;
  switch (s) {
    case Scenario::Fig1:
    case Scenario::Witness:
    case Scenario::Custom:
      cfg.betas = {0.1, 1.0, 10.0};
      break;
    case Scenario::FigS1:
      cfg.betas = {1.0};
      cfg.c_list = {1, 2, 4, 8, 16};
      break;
    case Scenario::FigS2:
      cfg.betas = {0.1, 1.0};
      break;
    case Scenario::FigS3:
      cfg.model.kappa = 0.95;
      cfg.betas = {0.1, 0.5, 1.0};
      cfg.initial.kind = InitialKind::Gibbs;
      break;
  }
  if (s == Scenario::Custom) cfg.betas = {1.0};
  return cfg;
}

RunConfig parse_config(const std::string& text, Scenario fallback) {
  json j;
  try {
    j = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");

  Scenario s = fallback;
  if (j.contains("scenario")) s = parse_scenario(j.at("scenario").get<std::string>());
  RunConfig cfg = default_config(s);

  if (j.contains("model")) {
    const json& m = j.at("model");
    read(m, "omega0", cfg.model.omega0);
    read(m, "omega1", cfg.model.omega1);
    read(m, "kappa", cfg.model.kappa);
    read(m, "gamma_plus", cfg.model.gamma_plus);
    read(m, "gamma_minus", cfg.model.gamma_minus);
    read(m, "c", cfg.model.c);
    read(m, "enforce_resonance", cfg.model.enforce_resonance);
  }
  if (j.contains("initial_state")) cfg.initial = parse_initial(j.at("initial_state"));
  read(j, "betas", cfg.betas);
  read(j, "c_list", cfg.c_list);
  if (j.contains("time_grid")) {
    read(j.at("time_grid"), "t_max", cfg.grid.t_max);
    read(j.at("time_grid"), "points", cfg.grid.points);
    std::string spacing = cfg.grid.log_spacing ? "log" : "linear";
    read(j.at("time_grid"), "spacing", spacing);
    if (spacing != "log" && spacing != "linear")
      throw ConfigError("config: time_grid.spacing must be \"linear\" or \"log\"");
    cfg.grid.log_spacing = spacing == "log";
    read(j.at("time_grid"), "t_min", cfg.grid.t_min);
    read(j.at("time_grid"), "per_decade", cfg.grid.per_decade);
  }
  if (j.contains("drive")) {
    const json& d = j.at("drive");
    read(d, "enabled", cfg.drive.enabled);
    read(d, "from_equilibrium", cfg.drive.from_equilibrium);
    read(d, "omega_end", cfg.drive.omega_end);
    read(d, "duration", cfg.drive.duration);
    std::string shape = cfg.drive.smooth ? "smooth" : "linear";
    read(d, "shape", shape);
    if (shape != "smooth" && shape != "linear")
      throw ConfigError("config: drive.shape must be \"smooth\" or \"linear\"");
    cfg.drive.smooth = shape == "smooth";
  }
  if (j.contains("witness")) read(j.at("witness"), "threshold", cfg.witness_threshold);
  if (j.contains("output")) {
    read(j.at("output"), "dir", cfg.out_dir);
    read(j.at("output"), "svg", cfg.emit_svg);
  }
  return cfg;
}

RunConfig load_config(const std::string& path, Scenario fallback) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), fallback);
}

void validate(const RunConfig& cfg) {
  if (!(cfg.grid.t_max > 0.0) || !std::isfinite(cfg.grid.t_max))
    throw ConfigError("config: time_grid.t_max must be positive");
  if (!cfg.grid.log_spacing && cfg.grid.points < 16)
    throw ConfigError("config: time_grid.points must be at least 16");
  if (cfg.grid.log_spacing && (!(cfg.grid.t_min > 0.0) || !(cfg.grid.t_min < cfg.grid.t_max) ||
                               cfg.grid.per_decade < 4))
    throw ConfigError("config: log time grid needs 0 < t_min < t_max and per_decade >= 4");
  if (cfg.betas.empty()) throw ConfigError("config: betas must not be empty");
  for (double b : cfg.betas)
    if (!(b > 0.0) || !std::isfinite(b)) throw ConfigError("config: betas must be positive");
  for (double c : cfg.c_list)
    if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("config: c_list must be positive");
  if (cfg.scenario == Scenario::FigS1 && cfg.c_list.empty())
    throw ConfigError("config: figS1 needs a non-empty c_list");
  if (!(cfg.witness_threshold > 0.0)) throw ConfigError("config: witness.threshold must be positive");
  if (cfg.drive.enabled && !(cfg.drive.duration > 0.0))
    throw ConfigError("config: drive.duration must be positive");
  for (double b : cfg.betas) cfg.model.with_beta(b).validate();
}

std::vector<double> physical_grid(const RunConfig& cfg, double c) {
  const double unit = c / cfg.model.gamma_plus;
  if (cfg.grid.log_spacing)
    return thermo::log_grid(cfg.grid.t_min * unit, cfg.grid.t_max * unit, cfg.grid.per_decade);
  return thermo::linear_grid(cfg.grid.t_max * unit, cfg.grid.points);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("cannot parse '" + item + "' as a number");
    }
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

}  // namespace strongtherm::cli

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

#include "strongtherm/cli/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "strongtherm/error.hpp"

namespace strongtherm::cli {

namespace {

using thermo::ThermoPoint;
using thermo::ThermoTrace;

spinboson::ModelConfig model_at(const RunConfig& cfg, double beta) {
  return cfg.model.with_beta(beta);
}

bool factorized(const RunConfig& cfg) {
  return cfg.initial.kind != InitialKind::Measured &&
         !(cfg.drive.enabled && cfg.drive.from_equilibrium);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string beta_label(double b) { return "beta=" + fmt(b); }

Series series_of(const std::string& name, const ThermoTrace& tr, double ThermoPoint::*field) {
  Series s{name, {}, {}};
  for (const ThermoPoint& p : tr.points) {
    s.x.push_back(p.t);
    s.y.push_back(p.*field);
  }
  return s;
}

Artifacts fig1_artifacts(const RunConfig& cfg, const thermo::ThermoOptions& opts) {
  Artifacts a;
  CsvTable t{{"t", "beta", "e_u", "e_u_weak", "s", "q", "sigma", "sigma_rate"}, {}};
  Chart energy{"Internal energy", "t (1/omega0)", "energy (omega0)", {}, false};
  Chart sigma{"Entropy production", "t (1/omega0)", "sigma", {}, false};
  for (const ThermoTrace& tr : fig1_traces(cfg, opts)) {
    double max_diff = 0.0;
    double min_sigma = 0.0;
    std::size_t negative_rates = 0;
    for (const ThermoPoint& p : tr.points) {
      t.rows.push_back({p.t, tr.beta, p.e_u, p.e_u_weak, p.s, p.q, p.sigma, p.sigma_rate});
      max_diff = std::max(max_diff, std::abs(p.e_u - p.e_u_weak));
      min_sigma = std::min(min_sigma, p.sigma);
      if (p.sigma_rate < -cfg.witness_threshold) ++negative_rates;
    }
    energy.series.push_back(series_of("E_U " + beta_label(tr.beta), tr, &ThermoPoint::e_u));
    energy.series.push_back(series_of("<H_S> " + beta_label(tr.beta), tr, &ThermoPoint::e_u_weak));
    sigma.series.push_back(series_of(beta_label(tr.beta), tr, &ThermoPoint::sigma));
    a.summary.push_back(beta_label(tr.beta) + ": max|E_U-<H_S>| = " + fmt(max_diff) +
                        ", min sigma = " + fmt(min_sigma) + ", grid points with sigma_rate < -" +
                        fmt(cfg.witness_threshold) + ": " + std::to_string(negative_rates));
  }
  a.tables.emplace_back("fig1.csv", std::move(t));
  a.charts.emplace_back("fig1_energy.svg", std::move(energy));
  a.charts.emplace_back("fig1_sigma.svg", std::move(sigma));
  return a;
}

Artifacts figS1_artifacts(const RunConfig& cfg, const thermo::ThermoOptions& opts) {
  Artifacts a;
  const std::vector<FigS1Row> rows = figS1_rows(cfg, opts);
  CsvTable t{{"c", "max_diff"}, {}};
  Series s{"max|E_U-<H_S>|", {}, {}};
  for (const FigS1Row& r : rows) {
    t.rows.push_back({r.c, r.max_diff});
    s.x.push_back(r.c);
    s.y.push_back(r.max_diff);
    a.summary.push_back("c=" + fmt(r.c) + ": max|E_U-<H_S>| = " + fmt(r.max_diff));
  }
  a.summary.push_back(std::string("strictly decreasing in c: ") +
                      (strictly_decreasing(rows) ? "yes" : "NO"));
  a.tables.emplace_back("figS1.csv", std::move(t));
  a.charts.emplace_back("figS1.svg", Chart{"Convergence to weak coupling", "c", "max_t |E_U - <H_S>|", {s}, true});
  return a;
}

Artifacts figS2_artifacts(const RunConfig& cfg, const thermo::ThermoOptions& opts) {
  Artifacts a;
  CsvTable t{{"t", "beta", "e_u", "e_u_weak", "e_u_star"}, {}};
  Chart chart{"E_U, <H_S> and mean-force energy", "t (1/omega0)", "energy (omega0)", {}, false};
  for (const MeanForceRun& run : mean_force_runs(cfg, opts)) {
    std::size_t closer = 0;
    Series star{"E_U* " + beta_label(run.trace.beta), {}, {}};
    for (std::size_t k = 0; k < run.trace.points.size(); ++k) {
      const ThermoPoint& p = run.trace.points[k];
      const double es = run.star[k].e_u_star;
      t.rows.push_back({p.t, run.trace.beta, p.e_u, p.e_u_weak, es});
      if (std::abs(p.e_u - p.e_u_weak) <= std::abs(es - p.e_u_weak)) ++closer;
      star.x.push_back(p.t);
      star.y.push_back(es);
    }
    chart.series.push_back(series_of("E_U " + beta_label(run.trace.beta), run.trace, &ThermoPoint::e_u));
    chart.series.push_back(series_of("<H_S> " + beta_label(run.trace.beta), run.trace, &ThermoPoint::e_u_weak));
    chart.series.push_back(std::move(star));
    a.summary.push_back(beta_label(run.trace.beta) + ": E_U closer to <H_S> than E_U* at " +
                        std::to_string(closer) + " of " + std::to_string(run.trace.points.size()) +
                        " grid points");
  }
  a.tables.emplace_back("figS2.csv", std::move(t));
  a.charts.emplace_back("figS2.svg", std::move(chart));
  return a;
}

Artifacts figS3_artifacts(const RunConfig& cfg, const thermo::ThermoOptions& opts) {
  Artifacts a;
  CsvTable t{{"t", "beta", "sigma_star", "sigma"}, {}};
  Chart chart{"Mean-force entropy production", "t (1/omega0)", "entropy production", {}, false};
  for (const MeanForceRun& run : mean_force_runs(cfg, opts)) {
    double min_star = 0.0;
    double max_sigma = 0.0;
    Series star{"sigma* " + beta_label(run.trace.beta), {}, {}};
    for (std::size_t k = 0; k < run.trace.points.size(); ++k) {
      const ThermoPoint& p = run.trace.points[k];
      const double ss = run.star[k].sigma_star;
      t.rows.push_back({p.t, run.trace.beta, ss, p.sigma});
      min_star = std::min(min_star, ss);
      max_sigma = std::max(max_sigma, std::abs(p.sigma));
      star.x.push_back(p.t);
      star.y.push_back(ss);
    }
    chart.series.push_back(std::move(star));
    chart.series.push_back(series_of("sigma " + beta_label(run.trace.beta), run.trace, &ThermoPoint::sigma));
    a.summary.push_back(beta_label(run.trace.beta) + ": min sigma* = " + fmt(min_star) +
                        ", max|sigma| = " + fmt(max_sigma));
  }
  a.tables.emplace_back("figS3.csv", std::move(t));
  a.charts.emplace_back("figS3.svg", std::move(chart));
  return a;
}

Artifacts custom_artifacts(const RunConfig& cfg, const thermo::ThermoOptions& opts) {
  Artifacts a;
  CsvTable t{{"t", "beta", "e_u", "f", "s", "q", "w", "sigma", "sigma_rate", "e_u_weak", "s_vn"}, {}};
  Chart energy{"Internal energy", "t (1/omega0)", "energy (omega0)", {}, false};
  Chart sigma{"Entropy production", "t (1/omega0)", "sigma", {}, false};
  for (double beta : cfg.betas) {
    const ThermoTrace tr = custom_trace(cfg, beta, opts);
    double min_sigma = 0.0;
    for (const ThermoPoint& p : tr.points) {
      t.rows.push_back({p.t, beta, p.e_u, p.f, p.s, p.q, p.w, p.sigma, p.sigma_rate, p.e_u_weak, p.s_vn});
      min_sigma = std::min(min_sigma, p.sigma);
    }
    energy.series.push_back(series_of("E_U " + beta_label(beta), tr, &ThermoPoint::e_u));
    energy.series.push_back(series_of("<H_S> " + beta_label(beta), tr, &ThermoPoint::e_u_weak));
    sigma.series.push_back(series_of(beta_label(beta), tr, &ThermoPoint::sigma));
    a.summary.push_back(beta_label(beta) + ": min sigma = " + fmt(min_sigma) + ", final W = " +
                        fmt(tr.points.back().w) + ", final Q = " + fmt(tr.points.back().q));
  }
  a.tables.emplace_back("custom.csv", std::move(t));
  a.charts.emplace_back("custom_energy.svg", std::move(energy));
  a.charts.emplace_back("custom_sigma.svg", std::move(sigma));
  return a;
}

Artifacts witness_artifacts(const RunConfig& cfg, const thermo::ThermoOptions& opts) {
  Artifacts a;
  CsvTable iv{{"beta", "t_start", "t_end", "min_rate"}, {}};
  CsvTable dv{{"beta", "t_start", "t_end", "cp_divisible", "min_choi_eigenvalue", "interval_rate"}, {}};
  Chart chart{"Entropy-production rate", "t (1/omega0)", "d sigma / dt", {}, false};
  for (double beta : cfg.betas) {
    const ThermoTrace tr = custom_trace(cfg, beta, opts);
    std::vector<double> times;
    for (const ThermoPoint& p : tr.points) times.push_back(p.t);
    const std::vector<DivisibilityInterval> scan = divisibility_scan(times, tr.maps, 1e-9, opts.policy);
    const witness::WitnessReport rep = witness::detect_negative_rate(tr.points, cfg.witness_threshold, scan);
    for (const witness::NegativeRateInterval& i : rep.intervals)
      iv.rows.push_back({beta, i.t_start, i.t_end, i.min_rate});
    for (std::size_t k = 0; k < scan.size(); ++k) {
      const double min_eig = scan[k].verdict ? scan[k].verdict->min_choi_eigenvalue : std::nan("");
      dv.rows.push_back({beta, scan[k].t_start, scan[k].t_end, scan[k].cp_divisible() ? 1.0 : 0.0,
                         min_eig, rep.divisibility[k].interval_rate});
    }
    chart.series.push_back(series_of(beta_label(beta), tr, &ThermoPoint::sigma_rate));
    a.summary.push_back(beta_label(beta) + ": " + rep.summary());
  }
  a.tables.emplace_back("witness_intervals.csv", std::move(iv));
  a.tables.emplace_back("witness_divisibility.csv", std::move(dv));
  a.charts.emplace_back("witness_rate.svg", std::move(chart));
  return a;
}

}  // namespace

DensityMatrix initial_density(const RunConfig& cfg, const spinboson::ModelConfig& model) {
  switch (cfg.initial.kind) {
    case InitialKind::Ground:
      return DensityMatrix(HermitianMatrix::diagonal(Eigen::Vector2d(0.0, 1.0)));
    case InitialKind::Excited:
      return DensityMatrix(HermitianMatrix::diagonal(Eigen::Vector2d(1.0, 0.0)));
    case InitialKind::Gibbs:
      return spinboson::gibbs_state(spinboson::system_hamiltonian(model), model.beta);
    case InitialKind::Measured: {
      const auto projs = thermo::projectors_from_basis(cfg.initial.basis);
      return thermo::measured_initial_state(model, projs).rho_s0;
    }
    case InitialKind::Custom:
      if (cfg.initial.matrix.rows() != 2 || cfg.initial.matrix.cols() != 2)
        throw ConfigError("custom initial state must be 2x2");
      try {
        return DensityMatrix(HermitianMatrix(cfg.initial.matrix, 1e-10));
      } catch (const NumericalError& e) {
        throw ConfigError(std::string("custom initial state is not a density matrix: ") + e.what());
      }
  }
  throw ConfigError("unknown initial state");
}

thermo::DrivenProtocol make_protocol(const RunConfig& cfg) {
  const HermitianMatrix h0 = spinboson::system_hamiltonian(cfg.model);
  const HermitianMatrix h1 = HermitianMatrix(pauli::sigma_z()) * (0.5 * cfg.drive.omega_end);
  const double duration = cfg.drive.duration * cfg.model.c / cfg.model.gamma_plus;
  return cfg.drive.smooth ? thermo::DrivenProtocol::smooth_ramp(h0, h1, duration)
                          : thermo::DrivenProtocol::linear_ramp(h0, h1, duration);
}

ThermoTrace custom_trace(const RunConfig& cfg, double beta, const thermo::ThermoOptions& opts) {
  const spinboson::ModelConfig model = model_at(cfg, beta);
  const std::vector<double> grid = physical_grid(cfg, model.c);
  ThermoTrace tr;
  if (cfg.drive.enabled) {
    const thermo::DrivenProtocol protocol = make_protocol(cfg);
    if (cfg.drive.from_equilibrium) {
      tr = thermo::thermo_driven_from_equilibrium(model, protocol, grid, opts);
    } else {
      if (cfg.initial.kind == InitialKind::Measured)
        throw UnsupportedConfigurationError("driving a measurement-prepared state is not supported");
      tr = thermo::thermo_driven(model, protocol, initial_density(cfg, model), grid, opts);
    }
  } else if (cfg.initial.kind == InitialKind::Measured) {
    tr = thermo::thermo_measured(model, thermo::projectors_from_basis(cfg.initial.basis), grid, opts);
  } else {
    tr = thermo::thermo_static(model, initial_density(cfg, model), grid, opts);
  }
  thermo::validate_trace(tr, factorized(cfg));
  return tr;
}

std::vector<ThermoTrace> fig1_traces(const RunConfig& cfg, const thermo::ThermoOptions& opts) {
  std::vector<ThermoTrace> out;
  for (double beta : cfg.betas) out.push_back(custom_trace(cfg, beta, opts));
  return out;
}

std::vector<FigS1Row> figS1_rows(const RunConfig& cfg, const thermo::ThermoOptions& opts) {
  std::vector<FigS1Row> out;
  for (double c : cfg.c_list) {
    RunConfig run = cfg;
    run.model.c = c;
    const ThermoTrace tr = custom_trace(run, cfg.betas.front(), opts);
    FigS1Row row{c, 0.0};
    for (const ThermoPoint& p : tr.points) row.max_diff = std::max(row.max_diff, std::abs(p.e_u - p.e_u_weak));
    out.push_back(row);
  }
  return out;
}

bool strictly_decreasing(const std::vector<FigS1Row>& rows) {
  for (std::size_t k = 1; k < rows.size(); ++k)
    if (!(rows[k].max_diff < rows[k - 1].max_diff)) return false;
  return true;
}

std::vector<MeanForceRun> mean_force_runs(const RunConfig& cfg, const thermo::ThermoOptions& opts) {
  std::vector<MeanForceRun> out;
  for (double beta : cfg.betas) {
    MeanForceRun run;
    run.trace = custom_trace(cfg, beta, opts);
    std::vector<double> grid;
    for (const ThermoPoint& p : run.trace.points) grid.push_back(p.t);
    run.star = thermo::mean_force_thermo(model_at(cfg, beta), run.trace.states, grid, opts.derivative);
    out.push_back(std::move(run));
  }
  return out;
}

Artifacts run_scenario(const RunConfig& cfg, const thermo::ThermoOptions& opts) {
  validate(cfg);
  switch (cfg.scenario) {
    case Scenario::Fig1: return fig1_artifacts(cfg, opts);
    case Scenario::FigS1: return figS1_artifacts(cfg, opts);
    case Scenario::FigS2: return figS2_artifacts(cfg, opts);
    case Scenario::FigS3: return figS3_artifacts(cfg, opts);
    case Scenario::Custom: return custom_artifacts(cfg, opts);
    case Scenario::Witness: return witness_artifacts(cfg, opts);
  }
  throw ConfigError("unknown scenario");
}

std::vector<std::string> write_artifacts(const RunConfig& cfg, const Artifacts& a) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + cfg.out_dir + "': " + ec.message());
  std::vector<std::string> written;
  for (const auto& [name, table] : a.tables) {
    const std::string path = (fs::path(cfg.out_dir) / name).string();
    write_text_file(path, format_csv(table));
    written.push_back(path);
  }
  if (cfg.emit_svg) {
    for (const auto& [name, chart] : a.charts) {
      const std::string path = (fs::path(cfg.out_dir) / name).string();
      write_text_file(path, render_svg(chart));
      written.push_back(path);
    }
  }
  return written;
}

}  // namespace strongtherm::cli

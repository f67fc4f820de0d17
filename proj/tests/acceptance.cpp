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

// Acceptance run: one PASS/FAIL line per criterion. Exit status is non-zero
// only when a criterion could not be evaluated.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "strongtherm/cli/config.hpp"
#include "strongtherm/cli/scenarios.hpp"
#include "strongtherm/error.hpp"
#include "strongtherm/thermo.hpp"
#include "strongtherm/witness.hpp"
#include "test_support.hpp"

using namespace strongtherm;
using spinboson::ModelConfig;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

DensityMatrix ground() { return DensityMatrix(HermitianMatrix::diagonal(Eigen::Vector2d(0.0, 1.0))); }

HermitianMatrix sz(double omega) { return HermitianMatrix(0.5 * omega * pauli::sigma_z()); }

double min_sigma(const thermo::ThermoTrace& tr) {
  double m = 0.0;
  for (const auto& p : tr.points) m = std::min(m, p.sigma);
  return m;
}

// Default figure grid and model.
cli::RunConfig fig1() { return cli::default_config(cli::Scenario::Fig1); }

// Ground start under a smooth 10% ramp of omega0 over [0, 1000], one trace per default beta.
struct DrivenRun {
  std::vector<double> grid = thermo::linear_grid(1000.0, 4001);
  thermo::DrivenProtocol ramp = thermo::DrivenProtocol::smooth_ramp(sz(1.0), sz(1.1), 1000.0);
  std::vector<thermo::ThermoTrace> traces;
};

const DrivenRun& driven_run() {
  static const DrivenRun run = [] {
    DrivenRun r;
    for (double beta : fig1().betas)
      r.traces.push_back(thermo::thermo_driven(fig1().model.with_beta(beta), r.ramp, ground(), r.grid));
    return r;
  }();
  return run;
}

Outcome structural_anchors() {
  const cli::RunConfig cfg = fig1();
  const auto grid = cli::physical_grid(cfg, cfg.model.c);
  const HermitianMatrix hs = spinboson::system_hamiltonian(cfg.model);
  double anchor = 0.0, trace_dev = 0.0;
  for (double beta : cfg.betas) {
    const spinboson::ReducedDynamics dyn(cfg.model.with_beta(beta));
    const auto maps = dyn.sweep(grid);
    const double z = std::exp(spinboson::log_partition(hs, beta));
    anchor = std::max(anchor, max_norm(thermo::h_circledast_static(maps[0], hs, beta).matrix() - hs.matrix()));
    for (const SuperOperator& m : maps) {
      const HermitianMatrix hc = thermo::h_circledast_static(m, hs, beta);
      trace_dev = std::max(trace_dev, std::abs(matrix_exp_herm(hc, -beta).matrix().trace().real() - z) / z);
    }
  }
  return {anchor <= 1e-9 && trace_dev <= 1e-9,
          "max|H(0) - H_S| = " + fmt(anchor) + ", max relative partition-function drift = " + fmt(trace_dev)};
}

Outcome mean_force_limit() {
  const ModelConfig cold = fig1().model.with_beta(200.0);
  const ComplexMatrix target =
      Eigen::Vector2d(0.5 * cold.omega0 - cold.kappa, -0.5 * cold.omega0).cast<Complex>().asDiagonal();
  const double dev_star = max_norm(spinboson::mean_force_hamiltonian(cold).matrix() - target);
  const spinboson::ReducedDynamics dyn(cold);
  const HermitianMatrix hs = spinboson::system_hamiltonian(cold);
  const double dev_late = max_norm(thermo::h_circledast_static(dyn.map_at(1e7), hs, cold.beta).matrix() - target);
  const double tol = 1e-4 * cold.omega0;
  return {dev_star <= tol && dev_late <= tol,
          "beta = 200: |H* - target| = " + fmt(dev_star) + ", |H(t = 1e7) - target| = " + fmt(dev_late) +
              ", tolerance " + fmt(tol)};
}

Outcome second_law() {
  double worst = 0.0;
  std::size_t traces = 0;
  auto take = [&](const thermo::ThermoTrace& tr) {
    worst = std::min(worst, min_sigma(tr));
    ++traces;
  };
  for (const auto& tr : cli::fig1_traces(fig1())) take(tr);
  for (cli::Scenario s : {cli::Scenario::FigS2, cli::Scenario::FigS3})
    for (const auto& run : cli::mean_force_runs(cli::default_config(s))) take(run.trace);

  const ModelConfig model = fig1().model;
  const DrivenRun& driven = driven_run();
  for (const auto& tr : driven.traces) take(tr);
  for (double beta : fig1().betas)
    take(thermo::thermo_driven_from_equilibrium(model.with_beta(beta), driven.ramp, driven.grid));

  const auto mgrid = cli::physical_grid(fig1(), 1.0);
  ComplexMatrix x(2, 2), y(2, 2);
  x << 1, 1, 1, -1;
  y << 1, 1, Complex(0, 1), Complex(0, -1);
  for (const ComplexMatrix& basis : {ComplexMatrix(ComplexMatrix::Identity(2, 2)), ComplexMatrix(x / std::sqrt(2.0)),
                                     ComplexMatrix(y / std::sqrt(2.0))})
    for (double beta : fig1().betas)
      take(thermo::thermo_measured(model.with_beta(beta), thermo::projectors_from_basis(basis), mgrid));
  return {worst >= -1e-6, std::to_string(traces) + " traces (factorized, driven, measurement-prepared), min sigma = " +
                              fmt(worst)};
}

Outcome gibbs_reversibility() {
  cli::RunConfig cfg = fig1();
  cfg.initial.kind = cli::InitialKind::Gibbs;
  double drift = 0.0, change = 0.0;
  for (const auto& tr : cli::fig1_traces(cfg)) {
    const auto& p0 = tr.points.front();
    for (std::size_t k = 0; k < tr.points.size(); ++k) {
      const auto& p = tr.points[k];
      drift = std::max({drift, std::abs(p.e_u - p0.e_u), std::abs(p.f - p0.f), std::abs(p.s - p0.s), std::abs(p.q),
                        std::abs(p.sigma)});
      change = std::max(change, max_norm(tr.states[k].matrix() - tr.states[0].matrix()));
    }
  }
  return {drift <= 1e-8 && change > 1e-3,
          "max drift of E_U, F, S, Q, sigma = " + fmt(drift) + ", max state change = " + fmt(change)};
}

Outcome figS3() {
  double best = 0.0, sigma_dev = 0.0;
  for (const auto& run : cli::mean_force_runs(cli::default_config(cli::Scenario::FigS3))) {
    for (const auto& m : run.star) best = std::min(best, m.sigma_star);
    for (const auto& p : run.trace.points) sigma_dev = std::max(sigma_dev, std::abs(p.sigma));
  }
  return {best < -1e-4 && sigma_dev <= 1e-8, "min sigma* = " + fmt(best) + ", max|sigma| = " + fmt(sigma_dev)};
}

Outcome figS1() {
  const auto rows = cli::figS1_rows(cli::default_config(cli::Scenario::FigS1));
  std::string d;
  for (const auto& r : rows) d += (d.empty() ? "" : ", ") + ("c=" + fmt(r.c) + ": " + fmt(r.max_diff));
  return {cli::strictly_decreasing(rows), "max|E_U - <H_S>|: " + d};
}

Outcome non_markovianity() {
  cli::RunConfig cfg = fig1();
  std::size_t intervals = 0, non_cp = 0;
  for (const auto& tr : cli::fig1_traces(cfg)) {
    const witness::WitnessReport r = witness::analyze(tr);
    intervals += r.intervals.size();
    non_cp += r.non_cp_intervals();
  }
  cfg.model.c = 64.0;
  std::size_t weak = 0;
  double weak_min = 0.0;
  for (const auto& tr : cli::fig1_traces(cfg)) {
    const witness::WitnessReport r = witness::detect_negative_rate(tr.points);
    weak += r.intervals.size();
    for (const auto& iv : r.intervals) weak_min = std::min(weak_min, iv.min_rate);
  }
  return {intervals >= 1 && non_cp >= 1 && weak == 0,
          "c=1: " + std::to_string(intervals) + " negative-rate intervals, " + std::to_string(non_cp) +
              " non-CP intermediate maps; c=64: " + std::to_string(weak) + " intervals (min rate " + fmt(weak_min) +
              ")"};
}

Outcome oracle_equivalence() {
  const ModelConfig model = fig1().model;
  double prop_dev = 0.0, null_dev = 0.0;
  for (double beta : fig1().betas) {
    const ModelConfig m = model.with_beta(beta);
    const GKLSGenerator g = spinboson::davies_generator(m);
    const LiouvillianExponential expl(build_liouvillian(g));
    const DensityMatrix spin = spinboson::gibbs_state(spinboson::spin_hamiltonian(m), beta);
    for (const DensityMatrix& s : {ground(), DensityMatrix(HermitianMatrix::diagonal(Eigen::Vector2d(1.0, 0.0)))}) {
      const DensityMatrix rho0(HermitianMatrix(tensor(s.matrix(), spin.matrix())));
      DensityMatrix rk = rho0;
      double t_prev = 0.0;
      for (double t : {1.0, 10.0, 100.0, 1000.0}) {
        rk = ode_oracle(g, rk, t - t_prev, 5e-3);
        t_prev = t;
        prop_dev = std::max(prop_dev, max_norm(propagate(expl, rho0, t).matrix() - rk.matrix()));
      }
    }
    const DensityMatrix gibbs = spinboson::gibbs_state(spinboson::build_model(m).h_full, beta);
    null_dev = std::max(null_dev, max_norm(testing::nullspace_state(g) - gibbs.matrix()));
  }
  return {prop_dev <= 1e-7 && null_dev <= 1e-9,
          "max|exp(tL) - RK4| over [0, 1000] = " + fmt(prop_dev) + ", max|kernel - Gibbs| = " + fmt(null_dev)};
}

Outcome monotonicity() {
  const ModelConfig model = fig1().model;
  const spinboson::ReducedDynamics dyn(model);
  std::mt19937_64 rng(2024);
  double worst = -1e300;
  for (int pair = 0; pair < 20; ++pair) {
    const DensityMatrix a = testing::random_state(rng, 2), b = testing::random_state(rng, 2);
    const double d0 = relative_entropy(a, b);
    for (double t : {0.3, 1.0, 3.0, 7.5, 20.0, 60.0, 150.0, 400.0, 1200.0, 5000.0}) {
      const SuperOperator m = dyn.map_at(t);
      const double dt = relative_entropy(DensityMatrix(m.apply(a.hermitian())), DensityMatrix(m.apply(b.hermitian())));
      worst = std::max(worst, dt - d0);
    }
  }
  return {worst <= 1e-8, "max D(rho_t||sigma_t) - D(rho||sigma) = " + fmt(worst)};
}

Outcome first_law() {
  const ModelConfig model = fig1().model;
  const DrivenRun& driven = driven_run();
  const auto& grid = driven.grid;
  double residual = 0.0;
  for (const auto& tr : driven.traces) {
    std::vector<double> e, q;
    for (const auto& p : tr.points) {
      e.push_back(p.e_u);
      q.push_back(p.q);
    }
    const auto de = thermo::grid_derivative(e, grid), dq = thermo::grid_derivative(q, grid);
    for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
      const double power = expectation(tr.states[k], driven.ramp.hdot_of_t(grid[k]));
      residual = std::max(residual, std::abs(de[k] - dq[k] - power));
    }
  }

  const cli::RunConfig cfg = fig1();
  const auto sgrid = cli::physical_grid(cfg, cfg.model.c);
  const HermitianMatrix h0 = spinboson::system_hamiltonian(cfg.model);
  const thermo::DrivenMaps dm = thermo::driven_maps(cfg.model, thermo::DrivenProtocol::constant(h0), sgrid);
  const spinboson::ReducedDynamics dyn(cfg.model);
  double reduction = 0.0;
  // Each evaluation integrates the drive from 0; sample every 16th grid point.
  for (std::size_t k = 0; k < sgrid.size(); k += 16) {
    const HermitianMatrix a =
        thermo::h_circledast_driven(h0, dm.maps, dm.adjoints, dm.hdots, sgrid, cfg.model.beta, k);
    const HermitianMatrix b = thermo::h_circledast_static(dyn.map_at(sgrid[k]), h0, cfg.model.beta);
    reduction = std::max(reduction, max_norm(a.matrix() - b.matrix()));
  }
  const double w0 = model.omega0;
  return {residual <= 1e-6 * w0 * w0 && reduction <= 1e-10,
          "max first-law residual = " + fmt(residual) + ", max|driven H - static H| (constant H_S) = " +
              fmt(reduction)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"strongtherm acceptance criteria"};
  std::string report;
  app.add_option("--report", report, "also write the report to this file");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"structural anchors", structural_anchors},
      {"mean-force limit", mean_force_limit},
      {"second law", second_law},
      {"Gibbs-start reversibility", gibbs_reversibility},
      {"negative mean-force entropy production", figS3},
      {"weak-coupling convergence", figS1},
      {"non-Markovianity witness", non_markovianity},
      {"oracle equivalence", oracle_equivalence},
      {"relative-entropy monotonicity", monotonicity},
      {"first law and static reduction", first_law},
  };

  std::ostringstream out;
  int passed = 0, errors = 0;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string line;
    try {
      const Outcome o = criteria[i].second();
      passed += o.pass ? 1 : 0;
      line = (o.pass ? "PASS " : "FAIL ") + std::to_string(i + 1) + " " + criteria[i].first + ": " + o.detail;
    } catch (const std::exception& e) {
      ++errors;
      line = "FAIL " + std::to_string(i + 1) + " " + criteria[i].first + ": error: " + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    line += " [" + fmt(secs) + " s]";
    std::cout << line << std::endl;
    out << line << '\n';
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const std::string tail = std::to_string(passed) + "/" + std::to_string(criteria.size()) + " criteria passed in " +
                           fmt(total) + " s";
  std::cout << tail << std::endl;
  out << tail << '\n';
  if (!report.empty()) {
    std::ofstream f(report);
    f << out.str();
    if (!f) {
      std::cerr << "cannot write " << report << '\n';
      return 1;
    }
  }
  return errors == 0 ? 0 : 1;
}

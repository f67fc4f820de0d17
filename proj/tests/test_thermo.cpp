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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "strongtherm/error.hpp"
#include "strongtherm/thermo.hpp"
#include "test_support.hpp"

using namespace strongtherm;
using namespace strongtherm::thermo;
using spinboson::ModelConfig;

namespace {

DensityMatrix ground() { return DensityMatrix(HermitianMatrix::diagonal(Eigen::Vector2d(0.0, 1.0))); }

DensityMatrix system_gibbs(const ModelConfig& cfg) {
  return spinboson::gibbs_state(spinboson::system_hamiltonian(cfg), cfg.beta);
}

HermitianMatrix sz(double omega) { return HermitianMatrix(0.5 * omega * pauli::sigma_z()); }

double max_abs_diff(const ThermoTrace& a, const ThermoTrace& b, double ThermoPoint::*f) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.points.size(); ++k) m = std::max(m, std::abs(a.points[k].*f - b.points[k].*f));
  return m;
}

}  // namespace

TEST_CASE("grids") {
  const auto g = linear_grid(10.0, 11);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 10.0);
  CHECK(g[3] == doctest::Approx(3.0));
  CHECK_THROWS_AS(linear_grid(-1.0, 5), ConfigError);
  CHECK_THROWS_AS(linear_grid(1.0, 1), ConfigError);

  const auto lg = log_grid(1e-2, 1e3, 10);
  CHECK(lg.front() == 0.0);
  CHECK(lg[1] == doctest::Approx(1e-2));
  CHECK(lg.back() == 1e3);
  CHECK(lg.size() == 52);
  CHECK_NOTHROW(validate_grid(lg));

  const std::vector<double> bad{0.0, 2.0, 1.0};
  CHECK_THROWS_AS(validate_grid(bad), ConfigError);
  const std::vector<double> neg{-1.0, 0.0};
  CHECK_THROWS_AS(validate_grid(neg), ConfigError);
  CHECK_THROWS_AS(validate_grid(std::vector<double>{}), ConfigError);
}

TEST_CASE("grid calculus") {
  const std::vector<double> t{0.0, 0.3, 0.5, 1.2, 2.0, 2.1};
  std::vector<double> quad, lin;
  for (double x : t) {
    quad.push_back(3.0 * x * x - x + 2.0);
    lin.push_back(4.0 * x - 1.0);
  }
  const auto dq = grid_derivative(quad, t);
  for (std::size_t i = 1; i + 1 < t.size(); ++i) CHECK(dq[i] == doctest::Approx(6.0 * t[i] - 1.0).epsilon(1e-12));
  const auto dl = grid_derivative(lin, t);
  CHECK(dl.front() == doctest::Approx(4.0));
  CHECK(dl.back() == doctest::Approx(4.0));
  const auto il = cumulative_trapezoid(lin, t);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(il[i] == doctest::Approx(2.0 * t[i] * t[i] - t[i]).epsilon(1e-12));
  CHECK_THROWS_AS(grid_derivative(lin, std::vector<double>{0.0}), ShapeError);
}

TEST_CASE("beta derivative") {
  const HermitianMatrix m(pauli::sigma_x() + 0.3 * pauli::sigma_z());
  CHECK(max_norm(beta_derivative([&](double) { return m; }, 2.0).matrix()) == 0.0);
  CHECK(max_norm(beta_derivative([&](double b) { return m * b; }, 2.0).matrix() - m.matrix()) < 1e-10);
  for (bool richardson : {false, true}) {
    const DerivativeOptions o{1e-4, richardson};
    CHECK(max_norm(beta_derivative([&](double b) { return m * b; }, 0.5, o).matrix() - m.matrix()) < 1e-10);
  }
  // Richardson removes the h^2 term: exact for cubics up to round-off.
  const HermitianMatrix d3 = beta_derivative([&](double b) { return m * (b * b * b); }, 1.5);
  CHECK(max_norm(d3.matrix() - m.matrix() * (3 * 1.5 * 1.5)) < 1e-8);
  CHECK_THROWS_AS(beta_stencil(-1.0), ConfigError);
  CHECK_THROWS_AS(beta_stencil(1.0, {2.0, true}), ConfigError);
}

TEST_CASE("h_circledast") {
  const ModelConfig cfg;
  const HermitianMatrix hs = spinboson::system_hamiltonian(cfg);
  CHECK(max_norm(h_circledast_static(SuperOperator::identity(2), hs, 1.0).matrix() - hs.matrix()) < 1e-14);

  const spinboson::ReducedDynamics dyn(cfg);
  for (double beta : {0.1, 1.0, 10.0}) {
    const spinboson::ReducedDynamics d(cfg.with_beta(beta));
    const double z = std::exp(spinboson::log_partition(hs, beta));
    for (double t : {0.0, 1.0, 13.0, 800.0, 4000.0}) {
      const HermitianMatrix hc = h_circledast_static(d.map_at(t), hs, beta);
      CHECK(std::abs(matrix_exp_herm(hc, -beta).matrix().trace().real() - z) < 1e-9 * z);
    }
  }
  const HermitianMatrix d0 = beta_derivative(
      [&](double b) { return h_circledast_static(spinboson::reduced_map(cfg.with_beta(b), 0.0), hs, b); }, 1.0);
  CHECK(max_norm(d0.matrix()) < 1e-8);

  SuperOperator flip = SuperOperator::identity(2);
  flip.matrix *= -1.0;
  try {
    h_circledast(flip, hs, 1.0);
    FAIL("expected NotPositiveDefiniteError");
  } catch (const NotPositiveDefiniteError& e) {
    CHECK(e.min_eigenvalue() < 0.0);
  }
  CHECK_THROWS_AS(h_circledast(SuperOperator::identity(2), hs, 0.0), ConfigError);

  // Large beta: the spectral shift keeps the exponential finite.
  CHECK_NOTHROW(h_circledast(dyn.map_at(50.0), hs, 2000.0));
}

TEST_CASE("static pipeline, ground start") {
  const ModelConfig cfg;
  const auto grid = linear_grid(400.0, 1601);
  const ThermoTrace tr = thermo_static(cfg, ground(), grid);
  CHECK_NOTHROW(validate_trace(tr, true));
  const ThermoPoint& p0 = tr.points.front();
  CHECK(std::abs(p0.e_u - p0.e_u_weak) < 1e-10);
  CHECK(std::abs(p0.s - p0.s_vn) < 1e-10);
  CHECK(std::abs(p0.q) < 1e-10);
  double min_sigma = 0.0, min_rate = 0.0;
  for (const ThermoPoint& p : tr.points) {
    min_sigma = std::min(min_sigma, p.sigma);
    min_rate = std::min(min_rate, p.sigma_rate);
    CHECK(p.w == 0.0);
    CHECK(p.f == doctest::Approx(p.e_u - p.s / cfg.beta).epsilon(1e-9));
  }
  CHECK(min_sigma >= -1e-6);
  CHECK(min_rate < -1e-3);

  SUBCASE("serial and parallel evaluation agree bit for bit") {
    ThermoOptions serial;
    serial.policy = ExecutionPolicy::Serial;
    const ThermoTrace ts = thermo_static(cfg, ground(), grid, serial);
    for (double ThermoPoint::*f : {&ThermoPoint::e_u, &ThermoPoint::s, &ThermoPoint::sigma, &ThermoPoint::sigma_rate})
      CHECK(max_abs_diff(tr, ts, f) == 0.0);
  }
}

TEST_CASE("static pipeline, Gibbs start") {
  for (double beta : {0.1, 1.0, 10.0}) {
    const ModelConfig cfg = ModelConfig{}.with_beta(beta);
    const ThermoTrace tr = thermo_static(cfg, system_gibbs(cfg), linear_grid(2000.0, 401));
    const ThermoPoint& p0 = tr.points.front();
    double state_change = 0.0;
    for (std::size_t k = 0; k < tr.points.size(); ++k) {
      const ThermoPoint& p = tr.points[k];
      CHECK(std::abs(p.e_u - p0.e_u) < 1e-8);
      CHECK(std::abs(p.f - p0.f) < 1e-8);
      CHECK(std::abs(p.s - p0.s) < 1e-8);
      CHECK(std::abs(p.q) < 1e-8);
      CHECK(std::abs(p.sigma) < 1e-8);
      state_change = std::max(state_change, max_norm(tr.states[k].matrix() - tr.states[0].matrix()));
    }
    CHECK(state_change > 1e-3);
  }
}

TEST_CASE("static pipeline, asymptotic anchors") {
  for (double beta : {0.1, 1.0, 10.0}) {
    const ModelConfig cfg = ModelConfig{}.with_beta(beta);
    const std::vector<double> grid{0.0, 5e5, 1e6};
    const ThermoTrace tr = thermo_static(cfg, ground(), grid);
    const DensityMatrix g = system_gibbs(cfg);
    const HermitianMatrix hs = spinboson::system_hamiltonian(cfg);
    CHECK(std::abs(tr.points.back().e_u - expectation(g, hs)) < 1e-6);
    CHECK(std::abs(tr.points.back().s - von_neumann_entropy(g)) < 1e-6);
  }
}

TEST_CASE("driven pipeline") {
  const ModelConfig cfg;
  const HermitianMatrix h0 = sz(1.0);

  SUBCASE("constant protocol reproduces the static pipeline") {
    const auto grid = linear_grid(300.0, 601);
    const ThermoTrace a = thermo_static(cfg, ground(), grid);
    const ThermoTrace b = thermo_driven(cfg, DrivenProtocol::constant(h0), ground(), grid);
    for (double ThermoPoint::*f : {&ThermoPoint::e_u, &ThermoPoint::f, &ThermoPoint::s, &ThermoPoint::q, &ThermoPoint::sigma})
      CHECK(max_abs_diff(a, b, f) < 1e-10);
  }

  SUBCASE("protocol consistency check") {
    DrivenProtocol p = DrivenProtocol::linear_ramp(h0, sz(1.1), 100.0);
    const auto grid = linear_grid(50.0, 51);
    CHECK_NOTHROW(p.validate(grid));
    p.hdot_of_t = [](double) { return HermitianMatrix::zero(2); };
    CHECK_THROWS_AS(p.validate(grid), ConfigError);
    CHECK_NOTHROW(DrivenProtocol::smooth_ramp(h0, sz(1.1), 100.0).validate(linear_grid(150.0, 301)));
  }

  SUBCASE("H_circ, Omega and quadrature order") {
    const DrivenProtocol p = DrivenProtocol::smooth_ramp(h0, sz(1.1), 40.0);
    auto evaluate = [&](std::size_t n, std::size_t* last, DrivenMaps* out, std::vector<double>* g) {
      *g = linear_grid(40.0, n);
      *out = driven_maps(cfg, p, *g);
      *last = n - 1;
      return h_circledast_driven(h0, out->maps, out->adjoints, out->hdots, *g, cfg.beta, n - 1);
    };
    DrivenMaps dm;
    std::vector<double> g;
    std::size_t last = 0;
    const HermitianMatrix coarse = evaluate(101, &last, &dm, &g);
    const HermitianMatrix mid = evaluate(201, &last, &dm, &g);
    const HermitianMatrix fine = evaluate(401, &last, &dm, &g);
    const double ratio = max_norm(coarse.matrix() - mid.matrix()) / max_norm(mid.matrix() - fine.matrix());
    CHECK(std::log2(ratio) == doctest::Approx(2.0).epsilon(0.15));

    CHECK(max_norm(h_circledast_driven(h0, dm.maps, dm.adjoints, dm.hdots, g, cfg.beta, 0).matrix() - h0.matrix()) < 1e-12);
    CHECK(max_norm(omega_aux(h0, dm.maps, dm.adjoints, dm.hdots, g, cfg.beta, 150, 150).matrix() -
                   h_circledast_driven(h0, dm.maps, dm.adjoints, dm.hdots, g, cfg.beta, 150).matrix()) == 0.0);
    const auto integral = integrated_heisenberg_drive(dm.adjoints, dm.hdots, g);
    for (std::size_t r : {10u, 200u, 400u})
      CHECK(max_norm(omega_aux(h0, dm.maps, dm.adjoints, dm.hdots, g, cfg.beta, 0, r).matrix() -
                     (h0 + integral[r]).matrix()) < 1e-10);

    // Second-law family over the auxiliary index r.
    const ThermoTrace tr = thermo_driven(cfg, p, ground(), g);
    const double beta = cfg.beta;
    for (std::size_t r = 0; r < g.size(); r += 25) {
      const HermitianMatrix o0 = omega_aux(h0, dm.maps, dm.adjoints, dm.hdots, g, beta, 0, r);
      for (std::size_t t = 0; t < g.size(); t += 25) {
        const HermitianMatrix ot = omega_aux(h0, dm.maps, dm.adjoints, dm.hdots, g, beta, t, r);
        const double v = tr.points[t].s - tr.points[0].s -
                         beta * (expectation(tr.states[t], ot) - expectation(tr.states[0], o0));
        CHECK(v >= -1e-6);
      }
    }
    CHECK_THROWS_AS(omega_aux(h0, dm.maps, dm.adjoints, dm.hdots, g, beta, 0, g.size()), ShapeError);
  }

  SUBCASE("first law and second law under a ramp") {
    const auto grid = linear_grid(200.0, 1601);
    const DrivenProtocol p = DrivenProtocol::smooth_ramp(h0, sz(1.1), 200.0);
    const ThermoTrace tr = thermo_driven(cfg, p, ground(), grid);
    CHECK_NOTHROW(validate_trace(tr, true));
    std::vector<double> e, q, w, power;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      e.push_back(tr.points[k].e_u);
      q.push_back(tr.points[k].q);
      w.push_back(tr.points[k].w);
      power.push_back(expectation(tr.states[k], p.hdot_of_t(grid[k])));
    }
    const auto de = grid_derivative(e, grid), dq = grid_derivative(q, grid);
    for (std::size_t k = 1; k + 1 < grid.size(); ++k) CHECK(std::abs(de[k] - dq[k] - power[k]) <= 1e-6);
    for (std::size_t k = 1; k < grid.size(); ++k) {
      const double dt = grid[k] - grid[k - 1];
      CHECK(std::abs((e[k] - e[k - 1]) - (q[k] - q[k - 1]) - (w[k] - w[k - 1])) <= 1e-6 * dt);
    }
    const auto w_ref = cumulative_trapezoid(power, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) CHECK(w[k] == doctest::Approx(w_ref[k]).epsilon(1e-12));
    // Raising the splitting lowers the mostly occupied ground level.
    CHECK(w.back() < -1e-3);
  }
}

TEST_CASE("measured initial states") {
  const ModelConfig cfg;
  const auto z_basis = projectors_from_basis(ComplexMatrix::Identity(2, 2));
  const MeasuredState ms = measured_initial_state(cfg, z_basis);
  CHECK(ms.weights[0] + ms.weights[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(max_norm(ms.rho_s0.matrix() - spinboson::reduced_equilibrium_state(cfg).matrix()) < 1e-12);

  ModelConfig free = cfg;
  free.kappa = 0.0;
  const MeasuredState mf = measured_initial_state(free, z_basis);
  const DensityMatrix spin = spinboson::gibbs_state(spinboson::spin_hamiltonian(free), 1.0);
  for (const DensityMatrix& r : mf.spin_states) CHECK(max_norm(r.matrix() - spin.matrix()) < 1e-12);

  std::vector<ComplexMatrix> bad = z_basis;
  bad[1] = bad[0];
  CHECK_THROWS_AS(measured_initial_state(cfg, bad), ConfigError);
  CHECK_THROWS_AS(measured_initial_state(cfg, std::vector<ComplexMatrix>{z_basis[0]}), ConfigError);
  CHECK_THROWS_AS(measured_initial_state(cfg.with_beta(400.0), z_basis), ConfigError);

  const auto grid = linear_grid(3000.0, 601);
  const ThermoTrace eig = thermo_measured(cfg, z_basis, grid);
  CHECK_NOTHROW(validate_trace(eig, false));
  double shannon = 0.0;
  for (double p : ms.weights) shannon -= p * std::log(p);
  CHECK(eig.points.front().s_vn == doctest::Approx(shannon).epsilon(1e-12));

  ComplexMatrix x_basis(2, 2);
  x_basis << 1, 1, 1, -1;
  const ThermoTrace xt = thermo_measured(cfg, projectors_from_basis(x_basis / std::sqrt(2.0)), grid);
  CHECK_NOTHROW(validate_trace(xt, false));
  double min_sigma = 0.0;
  for (const ThermoPoint& p : xt.points) min_sigma = std::min(min_sigma, p.sigma);
  CHECK(min_sigma >= -1e-6);

  // Long-time relaxation back to the equilibrium values.
  const std::vector<double> far{0.0, 5e5, 1e6};
  const ThermoTrace xl = thermo_measured(cfg, projectors_from_basis(x_basis / std::sqrt(2.0)), far);
  const double beta = cfg.beta;
  const HermitianMatrix heq = spinboson::equilibrium_h_circledast(cfg);
  const HermitianMatrix dheq = beta_derivative(
      [&](double b) { return spinboson::equilibrium_h_circledast(cfg.with_beta(b)); }, beta);
  const DensityMatrix req = spinboson::reduced_equilibrium_state(cfg);
  CHECK(std::abs(xl.points.back().e_u - expectation(req, heq + dheq * beta)) < 1e-5);
  CHECK(std::abs(xl.points.back().s - (von_neumann_entropy(req) + beta * beta * expectation(req, dheq))) < 1e-5);
}

TEST_CASE("driven from equilibrium") {
  const ModelConfig cfg;
  const auto grid = linear_grid(100.0, 801);
  const DrivenProtocol p = DrivenProtocol::smooth_ramp(sz(1.0), sz(1.1), 100.0);
  const ThermoTrace tr = thermo_driven_from_equilibrium(cfg, p, grid);
  CHECK_NOTHROW(validate_trace(tr, false));
  for (const ThermoPoint& pt : tr.points) CHECK(std::abs(pt.sigma) < 1e-8);
  CHECK(tr.points.back().w < -1e-3);
}

TEST_CASE("mean-force functionals") {
  SUBCASE("decoupled model") {
    ModelConfig free;
    free.kappa = 0.0;
    const auto grid = linear_grid(100.0, 11);
    const ThermoTrace tr = thermo_static(free, ground(), grid);
    const auto star = mean_force_thermo(free, tr.states, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      CHECK(std::abs(star[k].e_u_star - tr.points[k].e_u_weak) < 1e-12);
      CHECK(std::abs(star[k].s_star - tr.points[k].s_vn) < 1e-12);
    }
  }
  SUBCASE("product thermal start") {
    ModelConfig cfg;
    cfg.kappa = 0.95;
    const auto grid = linear_grid(30.0, 301);
    double min_star = 0.0;
    for (double beta : {0.1, 0.5}) {
      const ModelConfig c = cfg.with_beta(beta);
      const ThermoTrace tr = thermo_static(c, system_gibbs(c), grid);
      for (const ThermoPoint& p : tr.points) CHECK(std::abs(p.sigma) < 1e-8);
      for (const MeanForcePoint& m : mean_force_thermo(c, tr.states, grid)) min_star = std::min(min_star, m.sigma_star);
    }
    CHECK(min_star < -1e-4);
  }
  SUBCASE("low temperature coincidence") {
    const ModelConfig cold = ModelConfig{}.with_beta(200.0);
    const auto grid = linear_grid(3000.0, 301);
    const ThermoTrace tr = thermo_static(cold, ground(), grid);
    const auto star = mean_force_thermo(cold, tr.states, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) CHECK(std::abs(star[k].e_u_star - tr.points[k].e_u) < 1e-4);
  }
}

TEST_CASE("weak-coupling reference") {
  ModelConfig free;
  free.kappa = 0.0;
  const auto grid = linear_grid(100.0, 51);
  const ThermoTrace tr = thermo_static(free, system_gibbs(free), grid);
  const auto w = weak_reference([&](double) { return spinboson::system_hamiltonian(free); }, tr.states, grid, 1.0);
  for (const WeakPoint& p : w) {
    CHECK(std::abs(p.q_weak) < 1e-14);
    CHECK(std::abs(p.sigma_weak) < 1e-14);
  }
  const ThermoTrace g = thermo_static(free, ground(), grid);
  const auto wg = weak_reference([&](double) { return spinboson::system_hamiltonian(free); }, g.states, grid, 1.0);
  CHECK(wg.front().s_vn == 0.0);
}

TEST_CASE("trace validation") {
  const ModelConfig cfg;
  ThermoTrace tr = thermo_static(cfg, ground(), linear_grid(50.0, 51));
  CHECK_NOTHROW(validate_trace(tr, true));
  ThermoTrace neg = tr;
  neg.points[10].sigma = -1e-3;
  CHECK_THROWS_AS(validate_trace(neg, true), NumericalError);
  ThermoTrace nan = tr;
  nan.points[3].e_u = std::nan("");
  CHECK_THROWS_AS(validate_trace(nan, true), NumericalError);
  ThermoTrace anchor = tr;
  anchor.points[0].e_u += 1e-6;
  CHECK_THROWS_AS(validate_trace(anchor, true), NumericalError);
  CHECK_NOTHROW(validate_trace(anchor, false));
}

TEST_CASE("relative entropy is contractive under the reduced maps") {
  const ModelConfig cfg;
  const spinboson::ReducedDynamics dyn(cfg);
  std::mt19937_64 rng(97);
  std::vector<SuperOperator> maps;
  for (double t : {0.5, 2.0, 3.7, 10.0, 55.0, 130.0, 700.0, 1500.0, 4000.0, 9000.0}) maps.push_back(dyn.map_at(t));
  for (int pair = 0; pair < 20; ++pair) {
    const DensityMatrix a = testing::random_state(rng, 2), b = testing::random_state(rng, 2);
    const double d0 = relative_entropy(a, b);
    for (const SuperOperator& m : maps) {
      const DensityMatrix at(m.apply(a.hermitian()));
      const DensityMatrix bt(m.apply(b.hermitian()));
      CHECK(relative_entropy(at, bt) <= d0 + 1e-8);
    }
  }
}

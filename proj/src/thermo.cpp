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

#include "strongtherm/thermo.hpp"

#include <cmath>
#include <sstream>

#include "strongtherm/dynmaps.hpp"
#include "strongtherm/error.hpp"
#include "thermo_engine.hpp"

namespace strongtherm::thermo {

// ---------------------------------------------------------------- grids

std::vector<double> linear_grid(double t_max, std::size_t n) {
  if (!(t_max > 0.0) || !std::isfinite(t_max) || n < 2)
    throw ConfigError("linear_grid: need t_max > 0 and at least two points");
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k)
    g[k] = t_max * static_cast<double>(k) / static_cast<double>(n - 1);
  g.back() = t_max;
  return g;
}

std::vector<double> log_grid(double t_min, double t_max, std::size_t per_decade) {
  if (!(t_min > 0.0) || !(t_max > t_min) || per_decade == 0)
    throw ConfigError("log_grid: need 0 < t_min < t_max and per_decade > 0");
  std::vector<double> g{0.0};
  const double decades = std::log10(t_max / t_min);
  const auto n = static_cast<std::size_t>(std::ceil(decades * static_cast<double>(per_decade)));
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = t_min * std::pow(10.0, static_cast<double>(k) / static_cast<double>(per_decade));
    g.push_back(std::min(t, t_max));
    if (t >= t_max) break;
  }
  if (g.back() < t_max) g.push_back(t_max);
  return g;
}

void validate_grid(std::span<const double> grid) {
  if (grid.empty()) throw ConfigError("time grid is empty");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!std::isfinite(grid[k]) || grid[k] < 0.0)
      throw ConfigError("time grid entries must be finite and non-negative");
    if (k > 0 && !(grid[k] > grid[k - 1]))
      throw ConfigError("time grid must be strictly increasing");
  }
}

std::vector<double> grid_derivative(std::span<const double> values, std::span<const double> grid) {
  if (values.size() != grid.size()) throw ShapeError("grid_derivative: size mismatch");
  const std::size_t n = grid.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  d.front() = (values[1] - values[0]) / (grid[1] - grid[0]);
  d.back() = (values[n - 1] - values[n - 2]) / (grid[n - 1] - grid[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h1 = grid[i] - grid[i - 1];
    const double h2 = grid[i + 1] - grid[i];
    d[i] = -h2 / (h1 * (h1 + h2)) * values[i - 1] + (h2 - h1) / (h1 * h2) * values[i] +
           h1 / (h2 * (h1 + h2)) * values[i + 1];
  }
  return d;
}

std::vector<double> cumulative_trapezoid(std::span<const double> values,
                                         std::span<const double> grid) {
  if (values.size() != grid.size()) throw ShapeError("cumulative_trapezoid: size mismatch");
  std::vector<double> out(values.size(), 0.0);
  for (std::size_t k = 1; k < values.size(); ++k)
    out[k] = out[k - 1] + 0.5 * (grid[k] - grid[k - 1]) * (values[k] + values[k - 1]);
  return out;
}

// ---------------------------------------------------------- beta derivative

BetaStencil beta_stencil(double beta, const DerivativeOptions& opts) {
  if (!(beta > 0.0) || !(opts.h_rel > 0.0))
    throw ConfigError("beta_stencil: beta and h_rel must be positive");
  const double h = opts.h_rel * std::max(beta, 1.0);
  if (!(beta - h > 0.0)) throw ConfigError("beta_stencil: step reaches beta <= 0");
  if (!opts.richardson) return {{beta - h, beta + h}, {-0.5 / h, 0.5 / h}};
  // (4 D(h/2) - D(h)) / 3 with D(h) = [f(b+h) - f(b-h)] / 2h.
  return {{beta - h, beta + h, beta - 0.5 * h, beta + 0.5 * h},
          {1.0 / (6.0 * h), -1.0 / (6.0 * h), -4.0 / (3.0 * h), 4.0 / (3.0 * h)}};
}

HermitianMatrix beta_derivative(const std::function<HermitianMatrix(double)>& f, double beta,
                                const DerivativeOptions& opts) {
  const BetaStencil st = beta_stencil(beta, opts);
  HermitianMatrix acc = f(st.betas[0]) * st.weights[0];
  for (std::size_t i = 1; i < st.betas.size(); ++i) acc = acc + f(st.betas[i]) * st.weights[i];
  return acc;
}

// -------------------------------------------------------- H_circ operators

HermitianMatrix h_circledast(const SuperOperator& map_t, const HermitianMatrix& x, double beta) {
  if (!(beta > 0.0)) throw ConfigError("h_circledast: beta must be positive");
  const EigenDecomposition eig = herm_eig(x);
  const double shift = eig.eigenvalues(0);
  // exp(-beta (X - shift)) has spectrum in (0, 1].
  RealVector w = (-beta * (eig.eigenvalues.array() - shift)).exp().matrix();
  const ComplexMatrix g = eig.eigenvectors * w.cast<Complex>().asDiagonal() * eig.eigenvectors.adjoint();
  const ComplexMatrix evolved = map_t.apply(g);
  const HermitianMatrix y(0.5 * (evolved + evolved.adjoint()), 1.0);
  try {
    return matrix_log_pd(y) * (-1.0 / beta) + HermitianMatrix::identity(x.dim()) * shift;
  } catch (const NotPositiveDefiniteError& e) {
    std::ostringstream os;
    os << "h_circledast: Lambda[exp(-beta X)] is not positive definite (min eigenvalue "
       << e.min_eigenvalue() << ")";
    throw NotPositiveDefiniteError(os.str(), e.min_eigenvalue());
  }
}

HermitianMatrix h_circledast_static(const SuperOperator& map_t, const HermitianMatrix& h_s,
                                    double beta) {
  return h_circledast(map_t, h_s, beta);
}

std::vector<HermitianMatrix> integrated_heisenberg_drive(std::span<const SuperOperator> adjoints,
                                                         std::span<const HermitianMatrix> hdots,
                                                         std::span<const double> grid) {
  if (adjoints.size() != grid.size() || hdots.size() != grid.size())
    throw ShapeError("integrated_heisenberg_drive: size mismatch");
  std::vector<HermitianMatrix> out;
  out.reserve(grid.size());
  if (grid.empty()) return out;
  const Index d = hdots[0].dim();
  out.push_back(HermitianMatrix::zero(d));
  HermitianMatrix prev = adjoints[0].apply(hdots[0]);
  for (std::size_t k = 1; k < grid.size(); ++k) {
    HermitianMatrix cur = adjoints[k].apply(hdots[k]);
    out.push_back(out.back() + (prev + cur) * (0.5 * (grid[k] - grid[k - 1])));
    prev = std::move(cur);
  }
  return out;
}

namespace {

void check_driven_inputs(std::span<const SuperOperator> maps,
                         std::span<const SuperOperator> adjoints,
                         std::span<const HermitianMatrix> hdots, std::span<const double> grid,
                         std::size_t index) {
  if (maps.size() != grid.size() || adjoints.size() != grid.size() || hdots.size() != grid.size())
    throw ShapeError("driven H_circ: maps, adjoints, hdots and grid differ in length");
  if (index >= grid.size()) throw ShapeError("driven H_circ: index outside the grid");
}

HermitianMatrix drive_integral_upto(std::span<const SuperOperator> adjoints,
                                    std::span<const HermitianMatrix> hdots,
                                    std::span<const double> grid, std::size_t upto) {
  const auto n = upto + 1;
  return integrated_heisenberg_drive(adjoints.first(n), hdots.first(n), grid.first(n)).back();
}

}  // namespace

HermitianMatrix h_circledast_driven(const HermitianMatrix& h0,
                                    std::span<const SuperOperator> maps,
                                    std::span<const SuperOperator> adjoints,
                                    std::span<const HermitianMatrix> hdots,
                                    std::span<const double> grid, double beta,
                                    std::size_t t_index) {
  return omega_aux(h0, maps, adjoints, hdots, grid, beta, t_index, t_index);
}

HermitianMatrix omega_aux(const HermitianMatrix& h0, std::span<const SuperOperator> maps,
                          std::span<const SuperOperator> adjoints,
                          std::span<const HermitianMatrix> hdots, std::span<const double> grid,
                          double beta, std::size_t t_index, std::size_t r_index) {
  check_driven_inputs(maps, adjoints, hdots, grid, std::max(t_index, r_index));
  const HermitianMatrix x = h0 + drive_integral_upto(adjoints, hdots, grid, r_index);
  return h_circledast(maps[t_index], x, beta);
}

// --------------------------------------------------------------- protocols

void DrivenProtocol::validate(std::span<const double> grid, double tol) const {
  if (!h_of_t || !hdot_of_t) throw ConfigError("DrivenProtocol: missing H_S(t) or dH_S/dt");
  validate_grid(grid);
  const double t_end = grid.back();
  for (double t : grid) {
    const double delta = 1e-5 * std::max(1.0, t);
    ComplexMatrix fd;
    if (t - delta < 0.0) {
      fd = (h_of_t(t + delta).matrix() - h_of_t(t).matrix()) / delta;
    } else if (t + delta > t_end) {
      fd = (h_of_t(t).matrix() - h_of_t(t - delta).matrix()) / delta;
    } else {
      fd = (h_of_t(t + delta).matrix() - h_of_t(t - delta).matrix()) / (2.0 * delta);
    }
    const double err = max_norm(fd - hdot_of_t(t).matrix());
    if (err > tol) {
      std::ostringstream os;
      os << "DrivenProtocol: dH/dt inconsistent with H(t) at t = " << t << " (error " << err
         << ")";
      throw ConfigError(os.str());
    }
  }
}

DrivenProtocol DrivenProtocol::constant(const HermitianMatrix& h) {
  const HermitianMatrix zero = HermitianMatrix::zero(h.dim());
  return {[h](double) { return h; }, [zero](double) { return zero; }};
}

DrivenProtocol DrivenProtocol::linear_ramp(const HermitianMatrix& h0, const HermitianMatrix& h1,
                                           double duration) {
  if (!(duration > 0.0)) throw ConfigError("linear_ramp: duration must be positive");
  const HermitianMatrix slope = (h1 - h0) * (1.0 / duration);
  const HermitianMatrix zero = HermitianMatrix::zero(h0.dim());
  return {[h0, h1, duration](double t) {
            return t >= duration ? h1 : h0 + (h1 - h0) * (t / duration);
          },
          [slope, zero, duration](double t) { return t >= duration ? zero : slope; }};
}

DrivenProtocol DrivenProtocol::smooth_ramp(const HermitianMatrix& h0, const HermitianMatrix& h1,
                                           double duration) {
  if (!(duration > 0.0)) throw ConfigError("smooth_ramp: duration must be positive");
  const HermitianMatrix delta = h1 - h0;
  const HermitianMatrix zero = HermitianMatrix::zero(h0.dim());
  const double k = M_PI / (2.0 * duration);
  return {[h0, h1, delta, k, duration](double t) {
            if (t >= duration) return h1;
            const double s = std::sin(k * t);
            return h0 + delta * (s * s);
          },
          [delta, zero, k, duration](double t) {
            if (t >= duration) return zero;
            return delta * (k * std::sin(2.0 * k * t));
          }};
}

DrivenMaps driven_maps(const ModelConfig& cfg, const DrivenProtocol& protocol,
                       std::span<const double> grid) {
  const std::vector<ComplexMatrix> joint = detail::driven_joint_propagators(cfg, protocol, grid);
  const DensityMatrix spin = spinboson::gibbs_state(spinboson::spin_hamiltonian(cfg), cfg.beta);
  DrivenMaps out;
  out.maps.reserve(grid.size());
  out.adjoints.reserve(grid.size());
  out.hdots.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    out.maps.push_back(detail::factorized_map(joint[k], spin.matrix(), grid[k]));
    out.adjoints.push_back(adjoint(out.maps.back()));
    out.hdots.push_back(protocol.hdot_of_t(grid[k]));
  }
  return out;
}

// ------------------------------------------------------------- pipelines

ThermoTrace thermo_static(const ModelConfig& cfg, const DensityMatrix& rho_s0,
                          std::span<const double> grid, const ThermoOptions& opts) {
  cfg.validate();
  validate_grid(grid);
  if (rho_s0.dim() != 2) throw ShapeError("thermo_static: the system is a qubit");
  const HermitianMatrix h_s = spinboson::system_hamiltonian(cfg);
  const std::vector<double> times(grid.begin(), grid.end());
  detail::EngineInput in;
  in.build = [cfg, times, policy = opts.policy](double b) {
    detail::Family fam;
    fam.maps = spinboson::ReducedDynamics(cfg.with_beta(b)).sweep(times, policy);
    return fam;
  };
  in.reference = [h_s](double) { return h_s; };
  in.reference_beta_independent = true;
  in.h_of_t = [h_s](double) { return h_s; };
  return detail::run_engine(in, rho_s0, cfg.beta, grid, opts);
}

ThermoTrace thermo_driven(const ModelConfig& cfg, const DrivenProtocol& protocol,
                          const DensityMatrix& rho_s0, std::span<const double> grid,
                          const ThermoOptions& opts) {
  cfg.validate();
  protocol.validate(grid);
  if (rho_s0.dim() != 2) throw ShapeError("thermo_driven: the system is a qubit");
  const std::vector<double> times(grid.begin(), grid.end());
  const HermitianMatrix h0 = protocol.h_of_t(grid.front());
  detail::EngineInput in;
  in.build = [cfg, protocol, times](double b) {
    DrivenMaps dm = driven_maps(cfg.with_beta(b), protocol, times);
    detail::Family fam;
    fam.exponent_shifts = integrated_heisenberg_drive(dm.adjoints, dm.hdots, times);
    fam.maps = std::move(dm.maps);
    return fam;
  };
  in.reference = [h0](double) { return h0; };
  in.reference_beta_independent = true;
  in.h_of_t = protocol.h_of_t;
  in.hdot_of_t = protocol.hdot_of_t;
  return detail::run_engine(in, rho_s0, cfg.beta, grid, opts);
}

std::vector<ComplexMatrix> projectors_from_basis(const ComplexMatrix& basis) {
  if (basis.rows() != basis.cols()) throw ShapeError("projectors_from_basis: basis not square");
  std::vector<ComplexMatrix> out;
  for (Index k = 0; k < basis.cols(); ++k) {
    const ComplexVector v = basis.col(k).normalized();
    out.push_back(v * v.adjoint());
  }
  return out;
}

MeasuredState measured_initial_state(const ModelConfig& cfg,
                                     std::span<const ComplexMatrix> projectors) {
  cfg.validate();
  constexpr double tol = 1e-10;
  if (projectors.empty()) throw ConfigError("measured_initial_state: no projectors");
  ComplexMatrix sum = ComplexMatrix::Zero(2, 2);
  for (std::size_t a = 0; a < projectors.size(); ++a) {
    const ComplexMatrix& p = projectors[a];
    if (p.rows() != 2 || p.cols() != 2) throw ShapeError("measured_initial_state: 2x2 projectors");
    if (max_norm(p - p.adjoint()) > tol || max_norm(p * p - p) > tol ||
        std::abs(p.trace().real() - 1.0) > tol)
      throw ConfigError("measured_initial_state: projectors must be rank-one orthogonal projectors");
    for (std::size_t b = a + 1; b < projectors.size(); ++b)
      if (max_norm(p * projectors[b]) > tol)
        throw ConfigError("measured_initial_state: projectors are not mutually orthogonal");
    sum += p;
  }
  if (max_norm(sum - ComplexMatrix::Identity(2, 2)) > tol)
    throw ConfigError("measured_initial_state: projectors do not resolve the identity");

  const spinboson::ModelOperators ops = spinboson::build_model(cfg);
  const DensityMatrix joint = spinboson::gibbs_state(ops.h_full, cfg.beta);
  const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);
  MeasuredState out{DensityMatrix::maximally_mixed(2), {}, {}, {}};
  ComplexMatrix rho0 = ComplexMatrix::Zero(2, 2);
  for (const ComplexMatrix& p : projectors) {
    const ComplexMatrix branch = tensor(p, id2) * joint.matrix();
    const double pk = branch.trace().real();
    if (pk < 1e-14) {
      std::ostringstream os;
      os << "measured_initial_state: outcome probability " << pk << " is below 1e-14";
      throw ConfigError(os.str());
    }
    const ComplexMatrix cond = partial_trace(branch, 2, 2, Subsystem::Reservoir) / pk;
    out.projectors.push_back(p);
    out.weights.push_back(pk);
    out.spin_states.emplace_back(HermitianMatrix(0.5 * (cond + cond.adjoint()), 1e-9));
    rho0 += pk * p;
  }
  out.rho_s0 = DensityMatrix(HermitianMatrix(rho0, 1e-9));
  return out;
}

ThermoTrace thermo_measured(const ModelConfig& cfg, std::span<const ComplexMatrix> projectors,
                            std::span<const double> grid, const ThermoOptions& opts) {
  validate_grid(grid);
  const MeasuredState nominal = measured_initial_state(cfg, projectors);
  const std::vector<double> times(grid.begin(), grid.end());
  const std::vector<ComplexMatrix> projs(projectors.begin(), projectors.end());
  detail::EngineInput in;
  in.build = [cfg, projs, times, policy = opts.policy](double b) {
    const ModelConfig cb = cfg.with_beta(b);
    const MeasuredState ms = measured_initial_state(cb, projs);
    std::vector<detail::Branch> branches;
    for (std::size_t k = 0; k < projs.size(); ++k)
      branches.push_back({projs[k], tensor(projs[k], ms.spin_states[k].matrix())});
    const LiouvillianExponential expl(build_liouvillian(spinboson::davies_generator(cb)));
    detail::Family fam;
    fam.maps.resize(times.size());
    for_each_index(times.size(), policy, [&](std::size_t k) {
      fam.maps[k] = detail::branch_map(expl.at(times[k]).matrix, branches, times[k]);
    });
    return fam;
  };
  in.reference = [cfg](double b) { return spinboson::equilibrium_h_circledast(cfg.with_beta(b)); };
  const HermitianMatrix h_s = spinboson::system_hamiltonian(cfg);
  in.h_of_t = [h_s](double) { return h_s; };
  return detail::run_engine(in, nominal.rho_s0, cfg.beta, grid, opts);
}

ThermoTrace thermo_driven_from_equilibrium(const ModelConfig& cfg, const DrivenProtocol& protocol,
                                           std::span<const double> grid,
                                           const ThermoOptions& opts) {
  cfg.validate();
  protocol.validate(grid);
  const std::vector<double> times(grid.begin(), grid.end());
  detail::EngineInput in;
  in.build = [cfg, protocol, times](double b) {
    const ModelConfig cb = cfg.with_beta(b);
    const DensityMatrix joint = spinboson::gibbs_state(spinboson::build_model(cb).h_full, b);
    const std::vector<detail::Branch> branches{{ComplexMatrix::Identity(2, 2), joint.matrix()}};
    const std::vector<ComplexMatrix> props = detail::driven_joint_propagators(cb, protocol, times);
    detail::Family fam;
    std::vector<SuperOperator> adjoints;
    std::vector<HermitianMatrix> hdots;
    for (std::size_t k = 0; k < times.size(); ++k) {
      fam.maps.push_back(detail::branch_map(props[k], branches, times[k]));
      adjoints.push_back(adjoint(fam.maps.back()));
      hdots.push_back(protocol.hdot_of_t(times[k]));
    }
    fam.exponent_shifts = integrated_heisenberg_drive(adjoints, hdots, times);
    return fam;
  };
  in.reference = [cfg](double b) { return spinboson::equilibrium_h_circledast(cfg.with_beta(b)); };
  in.h_of_t = protocol.h_of_t;
  in.hdot_of_t = protocol.hdot_of_t;
  const DensityMatrix rho0 = spinboson::reduced_equilibrium_state(cfg);
  return detail::run_engine(in, rho0, cfg.beta, grid, opts);
}

// ----------------------------------------------------- reference quantities

std::vector<MeanForcePoint> mean_force_thermo(const ModelConfig& cfg,
                                              std::span<const DensityMatrix> states,
                                              std::span<const double> grid,
                                              const DerivativeOptions& opts) {
  if (states.size() != grid.size()) throw ShapeError("mean_force_thermo: size mismatch");
  const double beta = cfg.beta;
  const HermitianMatrix h_star = spinboson::mean_force_hamiltonian(cfg);
  const HermitianMatrix dh_star = beta_derivative(
      [&cfg](double b) { return spinboson::mean_force_hamiltonian(cfg.with_beta(b)); }, beta, opts);
  const HermitianMatrix energy_op = h_star + dh_star * beta;
  std::vector<MeanForcePoint> out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    out[k].t = grid[k];
    out[k].e_u_star = expectation(states[k], energy_op);
    out[k].s_star = von_neumann_entropy(states[k]) + beta * beta * expectation(states[k], dh_star);
  }
  for (MeanForcePoint& p : out) {
    p.q_star = p.e_u_star - out.front().e_u_star;
    p.sigma_star = p.s_star - out.front().s_star - beta * p.q_star;
  }
  return out;
}

std::vector<WeakPoint> weak_reference(const std::function<HermitianMatrix(double)>& h_of_t,
                                      std::span<const DensityMatrix> states,
                                      std::span<const double> grid, double beta) {
  if (states.size() != grid.size()) throw ShapeError("weak_reference: size mismatch");
  const std::size_t n = grid.size();
  std::vector<WeakPoint> out(n);
  if (n == 0) return out;
  const Index d = states[0].dim();
  // d rho / dt entrywise on the grid.
  std::vector<ComplexMatrix> rho_dot(n, ComplexMatrix::Zero(d, d));
  std::vector<double> re(n);
  std::vector<double> im(n);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        re[k] = states[k].matrix()(i, j).real();
        im[k] = states[k].matrix()(i, j).imag();
      }
      const std::vector<double> dre = grid_derivative(re, grid);
      const std::vector<double> dim = grid_derivative(im, grid);
      for (std::size_t k = 0; k < n; ++k) rho_dot[k](i, j) = Complex(dre[k], dim[k]);
    }
  }
  std::vector<double> q_dot(n);
  std::vector<double> s_vn(n);
  for (std::size_t k = 0; k < n; ++k) {
    const HermitianMatrix h = h_of_t(grid[k]);
    out[k].t = grid[k];
    out[k].e_weak = expectation(states[k], h);
    s_vn[k] = von_neumann_entropy(states[k]);
    out[k].s_vn = s_vn[k];
    q_dot[k] = trace_product(h.matrix(), rho_dot[k]).real();
  }
  const std::vector<double> q = cumulative_trapezoid(q_dot, grid);
  const std::vector<double> ds = grid_derivative(s_vn, grid);
  for (std::size_t k = 0; k < n; ++k) {
    out[k].q_weak = q[k];
    out[k].sigma_weak = s_vn[k] - s_vn[0] - beta * q[k];
    out[k].sigma_weak_rate = ds[k] - beta * q_dot[k];
  }
  return out;
}

// ------------------------------------------------------------- validation

void validate_trace(const ThermoTrace& trace, bool factorized_start) {
  for (const ThermoPoint& p : trace.points) {
    const double vals[] = {p.t, p.e_u, p.f, p.s, p.q, p.w, p.sigma, p.sigma_rate, p.e_u_weak, p.s_vn};
    for (double v : vals) {
      if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "validate_trace: non-finite value at t = " << p.t;
        throw NumericalError(os.str());
      }
    }
    if (p.sigma < -kSecondLawTolerance) {
      std::ostringstream os;
      os << "validate_trace: entropy production " << p.sigma << " below -"
         << kSecondLawTolerance << " at t = " << p.t;
      throw NumericalError(os.str());
    }
  }
  if (factorized_start && !trace.points.empty() && trace.points.front().t == 0.0) {
    const ThermoPoint& p = trace.points.front();
    if (std::abs(p.e_u - p.e_u_weak) > kAnchorTolerance ||
        std::abs(p.s - p.s_vn) > kAnchorTolerance) {
      std::ostringstream os;
      os << "validate_trace: t = 0 anchors violated (E_U - <H_S> = " << p.e_u - p.e_u_weak
         << ", S - S_vN = " << p.s - p.s_vn << ")";
      throw NumericalError(os.str());
    }
  }
}

}  // namespace strongtherm::thermo

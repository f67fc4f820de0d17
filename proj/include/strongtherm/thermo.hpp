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

// thermo.hpp: nonequilibrium thermodynamics of an open system at arbitrary
// coupling strength, expressed through the reduced dynamical map only.
//
// The central object is
//
//     H_circ(t, beta) = -beta^-1 log Lambda_t[ exp(-beta X(t)) ],
//
// where X(t) = H_S for a time-independent Hamiltonian and
// X(t) = H_S(0) + int_0^t Lambda_s^*[dH_S/ds] ds under driving. From it
//
//     E_U(t) = Tr rho(t) [H_circ + beta dH_circ/dbeta]
//     F(t)   = Tr rho(t) [H_circ + beta^-1 log rho(t)]
//     S(t)   = Tr rho(t) [-log rho(t) + beta^2 dH_circ/dbeta]
//
// with heat Q(t) = E_U(t) - E_U(0) - W(t) and entropy production
// sigma(t) = S(t) - S(0) - beta Q(t) >= 0.

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "strongtherm/execution.hpp"
#include "strongtherm/gkls.hpp"
#include "strongtherm/qmatrix.hpp"
#include "strongtherm/spinboson.hpp"

namespace strongtherm::thermo {

using spinboson::ModelConfig;

struct ThermoPoint {
  double t = 0.0;
  double e_u = 0.0;         // internal energy
  double f = 0.0;           // free energy
  double s = 0.0;           // thermodynamic entropy (k_B = 1)
  double q = 0.0;           // accumulated heat
  double w = 0.0;           // accumulated work
  double sigma = 0.0;       // S(t) - S(0) - beta Q(t)
  double sigma_rate = 0.0;  // d sigma / dt on the grid
  double e_u_weak = 0.0;    // <H_S(t)>
  double s_vn = 0.0;        // von Neumann entropy
};

struct ThermoTrace {
  double beta = 0.0;
  std::vector<ThermoPoint> points;
  std::vector<DensityMatrix> states;  // rho_S(t) on the grid
  std::vector<SuperOperator> maps;    // the system map on the grid, nominal beta
};

struct DerivativeOptions {
  double h_rel = 1e-4;      // step h = h_rel * max(beta, 1)
  bool richardson = true;   // combine steps h and h/2
};

struct ThermoOptions {
  DerivativeOptions derivative;
  ExecutionPolicy policy = ExecutionPolicy::Parallel;
};

// ---------------------------------------------------------------- grids

/// n equally spaced points on [0, t_max].
std::vector<double> linear_grid(double t_max, std::size_t n);

/// 0 followed by `per_decade` log-spaced points per decade on [t_min, t_max].
std::vector<double> log_grid(double t_min, double t_max, std::size_t per_decade);

/// Throws ConfigError unless the grid is non-empty, finite, non-negative and
/// strictly increasing.
void validate_grid(std::span<const double> grid);

/// d values / dt: second-order centred differences on the interior (non-uniform
/// spacing allowed), first-order one-sided at both ends.
std::vector<double> grid_derivative(std::span<const double> values, std::span<const double> grid);

/// Composite trapezoid running integral, starting at 0.
std::vector<double> cumulative_trapezoid(std::span<const double> values,
                                         std::span<const double> grid);

// ---------------------------------------------------------- beta derivative

/// Inverse temperatures and weights of the derivative stencil around beta.
struct BetaStencil {
  std::vector<double> betas;
  std::vector<double> weights;
};
BetaStencil beta_stencil(double beta, const DerivativeOptions& opts = {});

/// d f / d beta by central differences, optionally Richardson-extrapolated.
HermitianMatrix beta_derivative(const std::function<HermitianMatrix(double)>& f, double beta,
                                const DerivativeOptions& opts = {});

// -------------------------------------------------------- H_circ operators

/// -beta^-1 log Lambda[exp(-beta X)], evaluated with the spectrum of X shifted
/// so the exponential never overflows. Throws NotPositiveDefiniteError (with
/// the offending eigenvalue) when Lambda[exp(-beta X)] is not positive
/// definite.
HermitianMatrix h_circledast(const SuperOperator& map_t, const HermitianMatrix& x, double beta);

/// Time-independent case: X = H_S.
HermitianMatrix h_circledast_static(const SuperOperator& map_t, const HermitianMatrix& h_s,
                                    double beta);

/// I(t_k) = int_0^{t_k} Lambda_s^*[dH_S/ds] ds by composite trapezoid on the
/// grid, for every k.
std::vector<HermitianMatrix> integrated_heisenberg_drive(std::span<const SuperOperator> adjoints,
                                                         std::span<const HermitianMatrix> hdots,
                                                         std::span<const double> grid);

/// H_circ(t_k) = -beta^-1 log Lambda_{t_k}[exp(-beta H_S(0) - beta I(t_k))].
HermitianMatrix h_circledast_driven(const HermitianMatrix& h0,
                                    std::span<const SuperOperator> maps,
                                    std::span<const SuperOperator> adjoints,
                                    std::span<const HermitianMatrix> hdots,
                                    std::span<const double> grid, double beta,
                                    std::size_t t_index);

/// Omega(t_k, r_j) = -beta^-1 log Lambda_{t_k}[exp(-beta H_S(0) - beta I(r_j))];
/// Omega(t, t) coincides with h_circledast_driven.
HermitianMatrix omega_aux(const HermitianMatrix& h0, std::span<const SuperOperator> maps,
                          std::span<const SuperOperator> adjoints,
                          std::span<const HermitianMatrix> hdots, std::span<const double> grid,
                          double beta, std::size_t t_index, std::size_t r_index);

// --------------------------------------------------------------- protocols

/// Time-dependent system Hamiltonian on the 2-dim system space.
struct DrivenProtocol {
  std::function<HermitianMatrix(double)> h_of_t;
  std::function<HermitianMatrix(double)> hdot_of_t;

  /// Throws ConfigError when a finite-difference derivative of h_of_t differs
  /// from hdot_of_t by more than tol (max norm) at any grid point.
  void validate(std::span<const double> grid, double tol = 1e-6) const;

  static DrivenProtocol constant(const HermitianMatrix& h);
  /// h0 + (h1 - h0) * min(t / duration, 1).
  static DrivenProtocol linear_ramp(const HermitianMatrix& h0, const HermitianMatrix& h1,
                                    double duration);
  /// h0 + (h1 - h0) * sin^2(pi t / (2 duration)), frozen after `duration`.
  static DrivenProtocol smooth_ramp(const HermitianMatrix& h0, const HermitianMatrix& h1,
                                    double duration);
};

/// Reduced maps (and their Heisenberg adjoints) of the driven model on a
/// grid: piecewise-constant instantaneous Davies generators of
/// H_S(t_mid) + H_spin + V, composed step by step.
struct DrivenMaps {
  std::vector<SuperOperator> maps;
  std::vector<SuperOperator> adjoints;
  std::vector<HermitianMatrix> hdots;
};
DrivenMaps driven_maps(const ModelConfig& cfg, const DrivenProtocol& protocol,
                       std::span<const double> grid);

// ------------------------------------------------------------- pipelines

/// Factorized start rho_S0 (x) Gibbs(H_spin), time-independent H_S.
ThermoTrace thermo_static(const ModelConfig& cfg, const DensityMatrix& rho_s0,
                          std::span<const double> grid, const ThermoOptions& opts = {});

/// Factorized start under a driven system Hamiltonian; W(t) = int Tr[rho dH/ds].
ThermoTrace thermo_driven(const ModelConfig& cfg, const DrivenProtocol& protocol,
                          const DensityMatrix& rho_s0, std::span<const double> grid,
                          const ThermoOptions& opts = {});

/// Outcome of a non-selective projective measurement on the global Gibbs
/// state of the system-spin pair.
struct MeasuredState {
  DensityMatrix rho_s0;                  // sum_k p_k Pi_k
  std::vector<ComplexMatrix> projectors;
  std::vector<DensityMatrix> spin_states;  // rho_{R|k}
  std::vector<double> weights;             // p_k
};

/// Throws ConfigError when the projectors are not complete, orthonormal and
/// rank one, or when some p_k < 1e-14.
MeasuredState measured_initial_state(const ModelConfig& cfg,
                                     std::span<const ComplexMatrix> projectors);

/// Rank-one projectors onto the columns of a unitary.
std::vector<ComplexMatrix> projectors_from_basis(const ComplexMatrix& basis);

/// Measurement-prepared start, time-independent H_S. The map
/// X -> sum_k Tr[Pi_k X] Tr_R[e^{tL}(Pi_k (x) rho_{R|k})] replaces Lambda_t
/// and H_circ(eq, beta) replaces H_S.
ThermoTrace thermo_measured(const ModelConfig& cfg, std::span<const ComplexMatrix> projectors,
                            std::span<const double> grid, const ThermoOptions& opts = {});

/// Start from the global Gibbs state of the system-spin pair and switch the
/// drive on at t = 0.
ThermoTrace thermo_driven_from_equilibrium(const ModelConfig& cfg, const DrivenProtocol& protocol,
                                           std::span<const double> grid,
                                           const ThermoOptions& opts = {});

// ----------------------------------------------------- reference quantities

struct MeanForcePoint {
  double t = 0.0;
  double e_u_star = 0.0;
  double s_star = 0.0;
  double q_star = 0.0;
  double sigma_star = 0.0;
};

/// Nonequilibrium mean-force functionals, rho_eq -> rho_S(t) substituted into
/// the equilibrium expressions built from H_S*(beta).
std::vector<MeanForcePoint> mean_force_thermo(const ModelConfig& cfg,
                                              std::span<const DensityMatrix> states,
                                              std::span<const double> grid,
                                              const DerivativeOptions& opts = {});

struct WeakPoint {
  double t = 0.0;
  double e_weak = 0.0;      // <H_S(t)>
  double s_vn = 0.0;
  double q_weak = 0.0;      // int Tr[H_S d rho/ds] ds
  double sigma_weak = 0.0;  // S_vN(t) - S_vN(0) - beta Q^(w)(t)
  double sigma_weak_rate = 0.0;
};

std::vector<WeakPoint> weak_reference(const std::function<HermitianMatrix(double)>& h_of_t,
                                      std::span<const DensityMatrix> states,
                                      std::span<const double> grid, double beta);

// ------------------------------------------------------------- validation

inline constexpr double kSecondLawTolerance = 1e-6;
inline constexpr double kAnchorTolerance = 1e-10;

/// Spot-checks ThermoPoint invariants: finite entries, sigma >= -1e-6 and,
/// for factorized starts at t = 0, E_U = <H_S> and S = S_vN. Throws
/// NumericalError naming the offending time.
void validate_trace(const ThermoTrace& trace, bool factorized_start);

}  // namespace strongtherm::thermo

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

// spinboson.hpp: system qubit coupled by a flip-flop interaction to a
// reservoir spin, which is itself weakly damped by a bosonic continuum.
//
// The continuum only enters through the decay rates gamma(w0 +- kappa) of
// the Davies generator acting on the 4-dimensional system (x) spin space.
// Product basis ordering: |e,e>, |e,g>, |g,e>, |g,g> (system first).

#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "strongtherm/execution.hpp"
#include "strongtherm/gkls.hpp"
#include "strongtherm/qmatrix.hpp"

namespace strongtherm::spinboson {

struct ModelConfig {
  double omega0 = 1.0;       // system frequency
  double omega1 = 1.0;       // reservoir-spin frequency
  double kappa = 0.9;        // system-spin coupling
  double gamma_plus = 1e-3;  // gamma(w0 + kappa)
  double gamma_minus = 1e-3; // gamma(w0 - kappa)
  double beta = 1.0;         // inverse temperature
  double c = 1.0;            // weak-coupling scaling: kappa/c, gamma/c
  bool enforce_resonance = true;

  double effective_kappa() const { return kappa / c; }
  double effective_gamma_plus() const { return gamma_plus / c; }
  double effective_gamma_minus() const { return gamma_minus / c; }

  /// Same configuration at another inverse temperature.
  ModelConfig with_beta(double b) const {
    ModelConfig out = *this;
    out.beta = b;
    return out;
  }

  /// Throws ConfigError on any violated invariant. Returns true when the
  /// configuration is off resonance (allowed only with enforce_resonance off).
  bool validate() const;
};

struct ModelOperators {
  HermitianMatrix h_system;    // (w0/2) sigma_z (x) I on the 4-dim space
  HermitianMatrix h_spin;      // I (x) (w1/2) sigma_z
  HermitianMatrix v_coupling;  // kappa (sigma+ sigma- + sigma- sigma+)
  HermitianMatrix h_full;
  ComplexMatrix a_plus;   // A(w0 + kappa), product basis
  ComplexMatrix a_minus;  // A(w0 - kappa), product basis
};

/// The system Hamiltonian (w0/2) sigma_z on the 2-dim system space.
HermitianMatrix system_hamiltonian(const ModelConfig& cfg);
/// (w1/2) sigma_z on the spin space.
HermitianMatrix spin_hamiltonian(const ModelConfig& cfg);

ModelOperators build_model(const ModelConfig& cfg);

/// Analytic eigenoperators of the full Hamiltonian on resonance, in the
/// product basis. Throws UnsupportedConfigurationError off resonance.
std::pair<ComplexMatrix, ComplexMatrix> eigenoperators(const ModelConfig& cfg);

/// The same eigenoperators expressed in the energy eigenbasis ordered by
/// descending energy (w0, kappa, -kappa, -w0), together with the unitary
/// whose columns are those eigenvectors in the product basis.
struct EnergyBasis {
  ComplexMatrix vectors;  // columns: |ee>, (|eg>+|ge>)/sqrt2, (|eg>-|ge>)/sqrt2, |gg>
  ComplexMatrix a_plus;
  ComplexMatrix a_minus;
};
EnergyBasis energy_basis_eigenoperators(const ModelConfig& cfg);

/// Bohr-frequency decomposition X = sum_w A(w) with [H, A(w)] = -w A(w),
/// built from spectral projectors. Frequencies closer than `merge_tol` share
/// one component.
struct BohrComponent {
  double omega;
  ComplexMatrix op;
};
std::vector<BohrComponent> bohr_decomposition(const HermitianMatrix& h, const ComplexMatrix& x,
                                              double merge_tol = 1e-9);

/// Bose-Einstein occupation 1/(exp(beta w) - 1); returns 0 once beta*w
/// overflows.
double bose_occupation(double omega, double beta);

/// Davies generator of the system-spin pair with the full Hamiltonian as the
/// coherent part and no Lamb shift.
GKLSGenerator davies_generator(const ModelConfig& cfg);

/// Same construction for an arbitrary system Hamiltonian on the 2-dim system
/// space (used for driven protocols). Eigenoperators come from spectral
/// projectors, so this requires gamma_plus == gamma_minus unless `h_sys`
/// equals the resonant configuration's Hamiltonian.
GKLSGenerator davies_generator(const ModelConfig& cfg, const HermitianMatrix& h_sys);

/// exp(-beta H) / Tr exp(-beta H), shifted by the smallest eigenvalue.
DensityMatrix gibbs_state(const HermitianMatrix& h, double beta);

/// log Tr exp(-beta H), overflow-safe.
double log_partition(const HermitianMatrix& h, double beta);

/// Tr_spin Gibbs(h_full, beta).
DensityMatrix reduced_equilibrium_state(const ModelConfig& cfg);

/// H_S* = -beta^-1 log[(Z_{S-spin}/Z_spin) Tr_spin Gibbs(h_full, beta)].
HermitianMatrix mean_force_hamiltonian(const ModelConfig& cfg);

/// log(Z_{S-spin} / Z_spin), i.e. log Z*_S.
double log_mean_force_partition(const ModelConfig& cfg);

/// The asymptotic operator H_S* + beta^-1 log[Z_{S-spin}/(Z_S Z_spin)].
HermitianMatrix equilibrium_h_circledast(const ModelConfig& cfg);

/// Largest tolerated Choi-matrix negativity of a constructed reduced map.
inline constexpr double kMapChoiTolerance = 1e-7;

/// Reduced dynamics of the system qubit: propagate X (x) rho_R under the
/// Davies generator and trace out the spin. The Liouvillian is diagonalized
/// once; every map_at(t) call reuses the factorization.
class ReducedDynamics {
 public:
  /// Environment state rho_spin = Gibbs(H_spin, beta).
  explicit ReducedDynamics(const ModelConfig& cfg);

  const ModelConfig& config() const noexcept { return cfg_; }
  const LiouvillianExponential& joint_exponential() const noexcept { return *expl_; }
  const DensityMatrix& spin_state() const noexcept { return spin_state_; }

  /// The 4x4 superoperator on the system qubit at time t. Throws
  /// NumericalError when the Choi matrix is negative beyond 1e-7.
  SuperOperator map_at(double t) const;

  /// Joint state exp(tL)(rho_s (x) rho_spin).
  DensityMatrix joint_state(const DensityMatrix& rho_s, double t) const;

  std::vector<SuperOperator> sweep(std::span<const double> times,
                                   ExecutionPolicy policy = ExecutionPolicy::Parallel) const;

 private:
  ModelConfig cfg_;
  std::shared_ptr<const LiouvillianExponential> expl_;
  DensityMatrix spin_state_;
};

/// Convenience: ReducedDynamics(cfg).map_at(t).
SuperOperator reduced_map(const ModelConfig& cfg, double t);

/// Reduces a joint propagator P on the 4-dim space to the system map
/// X -> Tr_spin P(X (x) rho_spin).
SuperOperator reduce_joint_propagator(const ComplexMatrix& joint, const ComplexMatrix& rho_spin);

}  // namespace strongtherm::spinboson

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

#include "strongtherm/spinboson.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "strongtherm/dynmaps.hpp"
#include "strongtherm/error.hpp"

namespace strongtherm::spinboson {

namespace {

constexpr double kResonanceTolerance = 1e-12;

void require(bool ok, const char* what) {
  if (!ok) throw ConfigError(std::string("ModelConfig: ") + what);
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

ComplexMatrix spin_sigma_x() { return tensor(pauli::identity(), pauli::sigma_x()); }

HermitianMatrix full_hamiltonian(const ModelConfig& cfg, const HermitianMatrix& h_sys) {
  const ComplexMatrix id = pauli::identity();
  const double k = cfg.effective_kappa();
  const ComplexMatrix v = k * (tensor(pauli::sigma_plus(), pauli::sigma_minus()) +
                               tensor(pauli::sigma_minus(), pauli::sigma_plus()));
  return HermitianMatrix(tensor(h_sys.matrix(), id) +
                         tensor(id, spin_hamiltonian(cfg).matrix()) + v);
}

void add_thermal_pair(std::vector<JumpTerm>& jumps, const ComplexMatrix& a, double omega,
                      double gamma, double beta) {
  const double n = bose_occupation(omega, beta);
  jumps.push_back({a, gamma * (n + 1.0)});
  jumps.push_back({a.adjoint(), gamma * n});
}

}  // namespace

bool ModelConfig::validate() const {
  require(finite_positive(omega0), "omega0 must be positive");
  require(finite_positive(omega1), "omega1 must be positive");
  require(finite_positive(beta), "beta must be positive");
  require(std::isfinite(c) && c >= 1.0, "c must be >= 1");
  require(std::isfinite(kappa) && kappa >= 0.0, "kappa must be non-negative");
  require(effective_kappa() <= omega0, "kappa must not exceed omega0");
  require(omega0 - effective_kappa() > 0.0, "omega0 - kappa must be positive");
  require(std::isfinite(gamma_plus) && gamma_plus >= 0.0, "gamma_plus must be non-negative");
  require(std::isfinite(gamma_minus) && gamma_minus >= 0.0, "gamma_minus must be non-negative");
  const bool off_resonance = std::abs(omega0 - omega1) > kResonanceTolerance * omega0;
  if (off_resonance && enforce_resonance)
    throw ConfigError("ModelConfig: omega0 != omega1 while resonance is enforced");
  if (off_resonance && gamma_plus != gamma_minus)
    throw ConfigError(
        "ModelConfig: off resonance the spectral density must be flat (gamma_plus == "
        "gamma_minus)");
  return off_resonance;
}

HermitianMatrix system_hamiltonian(const ModelConfig& cfg) {
  return HermitianMatrix(0.5 * cfg.omega0 * pauli::sigma_z());
}

HermitianMatrix spin_hamiltonian(const ModelConfig& cfg) {
  return HermitianMatrix(0.5 * cfg.omega1 * pauli::sigma_z());
}

std::pair<ComplexMatrix, ComplexMatrix> eigenoperators(const ModelConfig& cfg) {
  if (std::abs(cfg.omega0 - cfg.omega1) > kResonanceTolerance * cfg.omega0)
    throw UnsupportedConfigurationError(
        "eigenoperators: analytic eigenoperators require omega0 == omega1");
  ComplexMatrix a_plus(4, 4);
  a_plus << 0, 0, 0, 0,
            1, 0, 0, 0,
           -1, 0, 0, 0,
            0, 1, 1, 0;
  ComplexMatrix a_minus(4, 4);
  a_minus << 0, 0, 0, 0,
             1, 0, 0, 0,
             1, 0, 0, 0,
             0, -1, 1, 0;
  return {0.5 * a_plus, 0.5 * a_minus};
}

EnergyBasis energy_basis_eigenoperators(const ModelConfig& cfg) {
  auto [a_plus, a_minus] = eigenoperators(cfg);
  const double r = 1.0 / std::sqrt(2.0);
  ComplexMatrix u = ComplexMatrix::Zero(4, 4);
  u(0, 0) = 1.0;
  u(1, 1) = r;
  u(2, 1) = r;
  u(1, 2) = r;
  u(2, 2) = -r;
  u(3, 3) = 1.0;
  return {u, u.adjoint() * a_plus * u, u.adjoint() * a_minus * u};
}

ModelOperators build_model(const ModelConfig& cfg) {
  cfg.validate();
  const ComplexMatrix id = pauli::identity();
  const HermitianMatrix hs = system_hamiltonian(cfg);
  HermitianMatrix h_system(tensor(hs.matrix(), id));
  HermitianMatrix h_spin(tensor(id, spin_hamiltonian(cfg).matrix()));
  const double k = cfg.effective_kappa();
  HermitianMatrix v(k * (tensor(pauli::sigma_plus(), pauli::sigma_minus()) +
                         tensor(pauli::sigma_minus(), pauli::sigma_plus())));
  HermitianMatrix h_full = h_system + h_spin + v;
  ComplexMatrix a_plus;
  ComplexMatrix a_minus;
  if (std::abs(cfg.omega0 - cfg.omega1) <= kResonanceTolerance * cfg.omega0) {
    std::tie(a_plus, a_minus) = eigenoperators(cfg);
  } else {
    // Off resonance: pick the two lowering components of sigma^x_R with the
    // largest weight; the full set is used by davies_generator.
    auto parts = bohr_decomposition(h_full, spin_sigma_x());
    std::vector<BohrComponent> lowering;
    for (auto& p : parts)
      if (p.omega > 0.0) lowering.push_back(std::move(p));
    std::sort(lowering.begin(), lowering.end(),
              [](const BohrComponent& x, const BohrComponent& y) { return x.omega > y.omega; });
    a_plus = lowering.empty() ? ComplexMatrix::Zero(4, 4) : lowering.front().op;
    a_minus = lowering.size() < 2 ? ComplexMatrix::Zero(4, 4) : lowering.back().op;
  }
  return {std::move(h_system), std::move(h_spin), std::move(v), std::move(h_full),
          std::move(a_plus), std::move(a_minus)};
}

std::vector<BohrComponent> bohr_decomposition(const HermitianMatrix& h, const ComplexMatrix& x,
                                              double merge_tol) {
  const EigenDecomposition eig = herm_eig(h);
  const Index d = h.dim();
  // Group degenerate eigenvalues into spectral projectors.
  std::vector<double> levels;
  std::vector<ComplexMatrix> projectors;
  for (Index k = 0; k < d; ++k) {
    const double e = eig.eigenvalues(k);
    const ComplexVector v = eig.eigenvectors.col(k);
    if (!levels.empty() && std::abs(e - levels.back()) <= merge_tol) {
      projectors.back() += v * v.adjoint();
    } else {
      levels.push_back(e);
      projectors.push_back(v * v.adjoint());
    }
  }
  std::vector<BohrComponent> out;
  for (std::size_t a = 0; a < levels.size(); ++a) {
    for (std::size_t b = 0; b < levels.size(); ++b) {
      ComplexMatrix piece = projectors[a] * x * projectors[b];
      if (max_norm(piece) < 1e-14) continue;
      const double omega = levels[b] - levels[a];
      auto it = std::find_if(out.begin(), out.end(), [&](const BohrComponent& c) {
        return std::abs(c.omega - omega) <= merge_tol;
      });
      if (it == out.end()) {
        out.push_back({omega, std::move(piece)});
      } else {
        it->op += piece;
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const BohrComponent& p, const BohrComponent& q) { return p.omega > q.omega; });
  return out;
}

double bose_occupation(double omega, double beta) {
  const double x = beta * omega;
  if (x > 700.0) return 0.0;
  return 1.0 / std::expm1(x);
}

GKLSGenerator davies_generator(const ModelConfig& cfg) {
  const bool off_resonance = cfg.validate();
  if (off_resonance) return davies_generator(cfg, system_hamiltonian(cfg));
  const double k = cfg.effective_kappa();
  const HermitianMatrix h_full = full_hamiltonian(cfg, system_hamiltonian(cfg));
  auto [a_plus, a_minus] = eigenoperators(cfg);
  std::vector<JumpTerm> jumps;
  if (k <= kResonanceTolerance * cfg.omega0) {
    // Degenerate Bohr frequencies: the secular approximation keeps one channel.
    const double g = 0.5 * (cfg.effective_gamma_plus() + cfg.effective_gamma_minus());
    add_thermal_pair(jumps, a_plus + a_minus, cfg.omega0, g, cfg.beta);
  } else {
    add_thermal_pair(jumps, a_plus, cfg.omega0 + k, cfg.effective_gamma_plus(), cfg.beta);
    add_thermal_pair(jumps, a_minus, cfg.omega0 - k, cfg.effective_gamma_minus(), cfg.beta);
  }
  return GKLSGenerator(h_full, std::move(jumps));
}

GKLSGenerator davies_generator(const ModelConfig& cfg, const HermitianMatrix& h_sys) {
  if (h_sys.dim() != 2) throw ShapeError("davies_generator: system Hamiltonian must be 2x2");
  const HermitianMatrix h_full = full_hamiltonian(cfg, h_sys);
  const bool flat = cfg.gamma_plus == cfg.gamma_minus;
  if (!flat && max_norm(h_sys.matrix() - system_hamiltonian(cfg).matrix()) > 1e-14)
    throw ConfigError(
        "davies_generator: a modified system Hamiltonian needs a flat spectral density "
        "(gamma_plus == gamma_minus)");
  if (!flat) return davies_generator(cfg);
  const double g = cfg.effective_gamma_plus();
  std::vector<JumpTerm> jumps;
  for (const BohrComponent& part : bohr_decomposition(h_full, spin_sigma_x())) {
    // Pure-dephasing (w = 0) components do not occur for sigma^x_R here.
    if (part.omega > 1e-9) add_thermal_pair(jumps, part.op, part.omega, g, cfg.beta);
  }
  return GKLSGenerator(h_full, std::move(jumps));
}

double log_partition(const HermitianMatrix& h, double beta) {
  const RealVector e = herm_eig(h).eigenvalues;
  const double emin = e(0);
  double sum = 0.0;
  for (double x : e) sum += std::exp(-beta * (x - emin));
  return -beta * emin + std::log(sum);
}

DensityMatrix gibbs_state(const HermitianMatrix& h, double beta) {
  if (!finite_positive(beta)) throw ConfigError("gibbs_state: beta must be positive");
  const EigenDecomposition eig = herm_eig(h);
  const double emin = eig.eigenvalues(0);
  RealVector w = (-beta * (eig.eigenvalues.array() - emin)).exp().matrix();
  w /= w.sum();
  ComplexMatrix rho = eig.eigenvectors * w.cast<Complex>().asDiagonal() * eig.eigenvectors.adjoint();
  return DensityMatrix(HermitianMatrix(0.5 * (rho + rho.adjoint())));
}

DensityMatrix reduced_equilibrium_state(const ModelConfig& cfg) {
  cfg.validate();
  const DensityMatrix joint = gibbs_state(full_hamiltonian(cfg, system_hamiltonian(cfg)), cfg.beta);
  return DensityMatrix(
      HermitianMatrix(partial_trace(joint.matrix(), 2, 2, Subsystem::System)));
}

double log_mean_force_partition(const ModelConfig& cfg) {
  return log_partition(full_hamiltonian(cfg, system_hamiltonian(cfg)), cfg.beta) -
         log_partition(spin_hamiltonian(cfg), cfg.beta);
}

HermitianMatrix mean_force_hamiltonian(const ModelConfig& cfg) {
  const DensityMatrix reduced = reduced_equilibrium_state(cfg);
  HermitianMatrix log_rho = matrix_log_pd(reduced.hermitian());
  const double shift = log_mean_force_partition(cfg);
  return (log_rho + HermitianMatrix::identity(2) * shift) * (-1.0 / cfg.beta);
}

HermitianMatrix equilibrium_h_circledast(const ModelConfig& cfg) {
  const double log_ratio = log_partition(full_hamiltonian(cfg, system_hamiltonian(cfg)), cfg.beta) -
                           log_partition(system_hamiltonian(cfg), cfg.beta) -
                           log_partition(spin_hamiltonian(cfg), cfg.beta);
  return mean_force_hamiltonian(cfg) + HermitianMatrix::identity(2) * (log_ratio / cfg.beta);
}

SuperOperator reduce_joint_propagator(const ComplexMatrix& joint, const ComplexMatrix& rho_spin) {
  if (joint.rows() != 16 || joint.cols() != 16 || rho_spin.rows() != 2 || rho_spin.cols() != 2)
    throw ShapeError("reduce_joint_propagator: expected a 16x16 propagator and a 2x2 spin state");
  SuperOperator out{2, ComplexMatrix(4, 4), true};
  for (Index j = 0; j < 2; ++j) {
    for (Index i = 0; i < 2; ++i) {
      ComplexMatrix e = ComplexMatrix::Zero(2, 2);
      e(i, j) = 1.0;
      const ComplexMatrix evolved = devectorize(joint * vectorize(tensor(e, rho_spin)), 4);
      out.matrix.col(i + 2 * j) = vectorize(partial_trace(evolved, 2, 2, Subsystem::System));
    }
  }
  return out;
}

ReducedDynamics::ReducedDynamics(const ModelConfig& cfg)
    : cfg_(cfg),
      expl_(std::make_shared<const LiouvillianExponential>(
          build_liouvillian(davies_generator(cfg)))),
      spin_state_(gibbs_state(spin_hamiltonian(cfg), cfg.beta)) {}

SuperOperator ReducedDynamics::map_at(double t) const {
  SuperOperator m = reduce_joint_propagator(expl_->at(t).matrix, spin_state_.matrix());
  const CptpVerdict v = is_cptp(m, kMapChoiTolerance);
  if (!v.completely_positive) {
    std::ostringstream os;
    os << "reduced_map: Choi matrix eigenvalue " << v.min_choi_eigenvalue << " at t = " << t
       << " violates complete positivity";
    throw NumericalError(os.str());
  }
  return m;
}

DensityMatrix ReducedDynamics::joint_state(const DensityMatrix& rho_s, double t) const {
  const DensityMatrix joint0(HermitianMatrix(tensor(rho_s.matrix(), spin_state_.matrix())));
  return propagate(*expl_, joint0, t);
}

std::vector<SuperOperator> ReducedDynamics::sweep(std::span<const double> times,
                                                  ExecutionPolicy policy) const {
  std::vector<SuperOperator> out(times.size());
  for_each_index(times.size(), policy, [&](std::size_t k) { out[k] = map_at(times[k]); });
  return out;
}

SuperOperator reduced_map(const ModelConfig& cfg, double t) {
  return ReducedDynamics(cfg).map_at(t);
}

}  // namespace strongtherm::spinboson

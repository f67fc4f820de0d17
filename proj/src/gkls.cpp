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

#include "strongtherm/gkls.hpp"

#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "strongtherm/error.hpp"

namespace strongtherm {

GKLSGenerator::GKLSGenerator(HermitianMatrix hamiltonian, std::vector<JumpTerm> jumps)
    : hamiltonian_(std::move(hamiltonian)), jumps_(std::move(jumps)) {
  for (const JumpTerm& j : jumps_) {
    if (!std::isfinite(j.rate) || j.rate < 0.0) {
      std::ostringstream os;
      os << "GKLSGenerator: rate " << j.rate << " must be finite and non-negative";
      throw ConfigError(os.str());
    }
    if (j.op.rows() != dim() || j.op.cols() != dim())
      throw ShapeError("GKLSGenerator: jump operator dimension differs from the Hamiltonian");
  }
  // K = H - (i/2) sum_k rate_k A_k^dagger A_k, so rhs = -i(K rho - rho K^dagger) + jumps.
  const Complex i(0.0, 1.0);
  effective_ = hamiltonian_.matrix();
  for (const JumpTerm& j : jumps_) {
    if (j.rate == 0.0) continue;
    effective_ -= 0.5 * i * j.rate * (j.op.adjoint() * j.op);
    active_.push_back({j.op, j.op.adjoint(), j.rate});
  }
  effective_dagger_ = effective_.adjoint();
}

ComplexMatrix GKLSGenerator::rhs(const ComplexMatrix& rho) const {
  const Complex i(0.0, 1.0);
  ComplexMatrix out = -i * (effective_ * rho - rho * effective_dagger_);
  for (const Active& a : active_) out.noalias() += a.rate * (a.op * rho * a.op_dagger);
  return out;
}

SuperOperator SuperOperator::identity(Index dim) {
  return {dim, ComplexMatrix::Identity(dim * dim, dim * dim), true};
}

ComplexMatrix SuperOperator::apply(const ComplexMatrix& x) const {
  if (x.rows() != dim || x.cols() != dim) throw ShapeError("SuperOperator::apply: shape mismatch");
  return devectorize(matrix * vectorize(x), dim);
}

HermitianMatrix SuperOperator::apply(const HermitianMatrix& x, double tol) const {
  return HermitianMatrix(apply(x.matrix()), tol);
}

SuperOperator SuperOperator::after(const SuperOperator& first) const {
  if (first.dim != dim) throw ShapeError("SuperOperator::after: dimension mismatch");
  return {dim, matrix * first.matrix, trace_preserving && first.trace_preserving};
}

double SuperOperator::trace_residual() const {
  const ComplexVector vid = vectorize(ComplexMatrix::Identity(dim, dim));
  const ComplexMatrix row = vid.adjoint() * matrix;
  return max_norm(row - vid.adjoint());
}

SuperOperator build_liouvillian(const GKLSGenerator& g) {
  const Index d = g.dim();
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  const ComplexMatrix& h = g.hamiltonian().matrix();
  const Complex i(0.0, 1.0);
  // vec(A X B) = (B^T (x) A) vec(X)
  ComplexMatrix l = -i * (tensor(id, h) - tensor(h.transpose(), id));
  for (const JumpTerm& j : g.jumps()) {
    if (j.rate == 0.0) continue;
    const ComplexMatrix ada = j.op.adjoint() * j.op;
    l += j.rate * (tensor(j.op.conjugate(), j.op) - 0.5 * tensor(id, ada) -
                   0.5 * tensor(ada.transpose(), id));
  }
  return {d, std::move(l), true};
}

LiouvillianExponential::LiouvillianExponential(SuperOperator liouvillian)
    : l_(std::move(liouvillian)) {
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(l_.matrix);
  if (solver.info() != Eigen::Success) {
    fallback_ = true;
    return;
  }
  eigenvalues_ = solver.eigenvalues();
  v_ = solver.eigenvectors();
  // Round-off in a zero eigenvalue grows as exp(eps t); snap it away.
  const double snap = 1e-13 * l_.matrix.norm();
  for (Complex& lambda : eigenvalues_) {
    if (std::abs(lambda.real()) <= snap) lambda.real(0.0);
    if (std::abs(lambda.imag()) <= snap) lambda.imag(0.0);
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(v_);
  const RealVector& sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
  if (!(cond < kMaxEigenvectorCondition)) {
    fallback_ = true;
    return;
  }
  v_inv_ = v_.inverse();
}

SuperOperator LiouvillianExponential::at(double t) const {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    std::ostringstream os;
    os << "propagator: time " << t << " must be finite and non-negative";
    throw ConfigError(os.str());
  }
  if (t == 0.0) return SuperOperator::identity(l_.dim);
  ComplexMatrix m;
  if (fallback_) {
    m = (l_.matrix * t).exp();
    if (!m.allFinite()) throw NumericalError("propagator: scaling-and-squaring fallback failed");
  } else {
    const ComplexVector phases = (eigenvalues_ * t).array().exp().matrix();
    m = v_ * phases.asDiagonal() * v_inv_;
  }
  return {l_.dim, std::move(m), l_.trace_preserving};
}

SuperOperator propagator(const SuperOperator& l, double t) {
  return LiouvillianExponential(l).at(t);
}

namespace {

DensityMatrix checked_state(const ComplexMatrix& rho, double t) {
  HermitianMatrix h(rho, 1e-9);
  try {
    return DensityMatrix(std::move(h), DensityMatrix::kTraceTolerance,
                         kPropagationPositivityTolerance);
  } catch (const NumericalError& e) {
    std::ostringstream os;
    os << "propagate: accuracy lost at t = " << t << ": " << e.what();
    throw NumericalError(os.str());
  }
}

}  // namespace

DensityMatrix propagate(const LiouvillianExponential& expl, const DensityMatrix& rho0, double t) {
  if (rho0.dim() != expl.liouvillian().dim) throw ShapeError("propagate: dimension mismatch");
  if (t == 0.0) return rho0;
  return checked_state(expl.at(t).apply(rho0.matrix()), t);
}

DensityMatrix propagate(const SuperOperator& l, const DensityMatrix& rho0, double t) {
  return propagate(LiouvillianExponential(l), rho0, t);
}

std::vector<SuperOperator> propagator_sweep(const LiouvillianExponential& expl,
                                            std::span<const double> times,
                                            ExecutionPolicy policy) {
  std::vector<SuperOperator> out(times.size());
  for_each_index(times.size(), policy, [&](std::size_t k) { out[k] = expl.at(times[k]); });
  return out;
}

SuperOperator adjoint(const SuperOperator& s) {
  return {s.dim, s.matrix.adjoint(), false};
}

DensityMatrix ode_oracle(const GKLSGenerator& g, const DensityMatrix& rho0, double t, double dt) {
  if (rho0.dim() != g.dim()) throw ShapeError("ode_oracle: dimension mismatch");
  if (t == 0.0) return rho0;
  if (!(dt > 0.0) || dt > t) {
    std::ostringstream os;
    os << "ode_oracle: step " << dt << " must lie in (0, t = " << t << "]";
    throw ConfigError(os.str());
  }
  // Crude bound on the generator norm from its matrix ingredients.
  double norm = 2.0 * g.hamiltonian().matrix().norm();
  for (const JumpTerm& j : g.jumps()) norm += 2.0 * j.rate * j.op.squaredNorm();
  if (dt * norm > 0.5) {
    std::ostringstream os;
    os << "ode_oracle: dt*||L|| = " << dt * norm << " is too large for RK4 accuracy";
    throw NumericalError(os.str());
  }
  const auto steps = static_cast<long long>(std::ceil(t / dt - 1e-9));
  const double h = t / static_cast<double>(steps);
  ComplexMatrix rho = rho0.matrix();
  for (long long n = 0; n < steps; ++n) {
    const ComplexMatrix k1 = g.rhs(rho);
    const ComplexMatrix k2 = g.rhs(rho + 0.5 * h * k1);
    const ComplexMatrix k3 = g.rhs(rho + 0.5 * h * k2);
    const ComplexMatrix k4 = g.rhs(rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return DensityMatrix(HermitianMatrix(rho, 1e-9), 1e-8, kPropagationPositivityTolerance);
}

}  // namespace strongtherm

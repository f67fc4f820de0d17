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

// gkls.hpp: GKLS generators, Liouvillian assembly and exact propagation.

#pragma once

#include <span>
#include <vector>

#include "strongtherm/execution.hpp"
#include "strongtherm/qmatrix.hpp"

namespace strongtherm {

struct JumpTerm {
  ComplexMatrix op;
  double rate = 0.0;
};

/// rho -> -i[H, rho] + sum_k rate_k (A_k rho A_k^dagger - 1/2 {A_k^dagger A_k, rho}).
class GKLSGenerator {
 public:
  /// Throws ConfigError on a negative or non-finite rate, ShapeError when a
  /// jump operator does not match the Hamiltonian's dimension.
  GKLSGenerator(HermitianMatrix hamiltonian, std::vector<JumpTerm> jumps);

  const HermitianMatrix& hamiltonian() const noexcept { return hamiltonian_; }
  const std::vector<JumpTerm>& jumps() const noexcept { return jumps_; }
  Index dim() const noexcept { return hamiltonian_.dim(); }

  /// Right-hand side of the master equation evaluated directly on matrices.
  ComplexMatrix rhs(const ComplexMatrix& rho) const;

 private:
  struct Active {
    ComplexMatrix op;
    ComplexMatrix op_dagger;
    double rate;
  };

  HermitianMatrix hamiltonian_;
  std::vector<JumpTerm> jumps_;
  ComplexMatrix effective_;
  ComplexMatrix effective_dagger_;
  std::vector<Active> active_;
};

/// Linear map on d x d operators, stored as a d^2 x d^2 matrix acting on
/// column-stacked operators.
struct SuperOperator {
  Index dim = 0;
  ComplexMatrix matrix;
  bool trace_preserving = false;

  static SuperOperator identity(Index dim);

  ComplexMatrix apply(const ComplexMatrix& x) const;
  HermitianMatrix apply(const HermitianMatrix& x, double tol = 1e-9) const;

  /// (*this) after `first`, i.e. X -> this(first(X)).
  SuperOperator after(const SuperOperator& first) const;

  /// || vec(I)^dagger S - vec(I)^dagger ||_max.
  double trace_residual() const;
};

SuperOperator build_liouvillian(const GKLSGenerator& g);

/// exp(t L) for a fixed Liouvillian. Diagonalizes L once and reassembles
/// V diag(exp(t lambda)) V^-1 per time; falls back to scaling-and-squaring
/// when the eigenvector matrix is too ill-conditioned (defective L).
class LiouvillianExponential {
 public:
  static constexpr double kMaxEigenvectorCondition = 1e8;

  explicit LiouvillianExponential(SuperOperator liouvillian);

  /// Throws ConfigError for t < 0, NumericalError when the fallback produces
  /// non-finite output.
  SuperOperator at(double t) const;

  const SuperOperator& liouvillian() const noexcept { return l_; }
  bool uses_fallback() const noexcept { return fallback_; }
  const ComplexVector& spectrum() const noexcept { return eigenvalues_; }

 private:
  SuperOperator l_;
  bool fallback_ = false;
  ComplexVector eigenvalues_;
  ComplexMatrix v_;
  ComplexMatrix v_inv_;
};

SuperOperator propagator(const SuperOperator& l, double t);

/// Positivity tolerance separating round-off from a genuine propagation error.
inline constexpr double kPropagationPositivityTolerance = 1e-8;

/// devec(exp(tL) vec(rho0)). Throws NumericalError when the result has an
/// eigenvalue below -1e-8.
DensityMatrix propagate(const LiouvillianExponential& expl, const DensityMatrix& rho0, double t);
DensityMatrix propagate(const SuperOperator& l, const DensityMatrix& rho0, double t);

/// exp(t_k L) for every k, evaluated with the given execution policy.
std::vector<SuperOperator> propagator_sweep(const LiouvillianExponential& expl,
                                            std::span<const double> times,
                                            ExecutionPolicy policy = ExecutionPolicy::Parallel);

/// Hilbert-Schmidt adjoint: Tr[S(A) B] = Tr[A S*(B)] for the Hermitian-conjugate
/// pairing, i.e. the conjugate transpose of the superoperator matrix.
SuperOperator adjoint(const SuperOperator& s);

/// Classic fixed-step RK4 integration of the master equation on matrices.
/// Independent of build_liouvillian; used as a verification oracle. Throws
/// ConfigError when dt > t or dt <= 0, NumericalError when dt*||L|| > 0.5.
DensityMatrix ode_oracle(const GKLSGenerator& g, const DensityMatrix& rho0, double t, double dt);

}  // namespace strongtherm

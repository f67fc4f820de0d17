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

// qmatrix.hpp: dense complex linear algebra for small operator spaces.
//
// Conventions used everywhere in the library:
//   * Kronecker products put the system factor first (leftmost).
//   * Operators are vectorized by column stacking, v[i + d*j] = M(i, j), so
//     vec(A X B) = (B^T (x) A) vec(X).
//   * Matrix functions of Hermitian operators go through the Hermitian
//     eigendecomposition only.

#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace strongtherm {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Largest absolute entry.
double max_norm(const ComplexMatrix& m);

/// Square complex matrix that is Hermitian up to round-off. Stored symmetrized
/// as (M + M^dagger)/2.
class HermitianMatrix {
 public:
  /// Relative tolerance: ||M - M^dagger||_max <= tol * max(1, ||M||_max).
  static constexpr double kDefaultTolerance = 1e-12;

  /// Throws ShapeError for non-square or empty input, NumericalError for
  /// non-finite entries or an anti-Hermitian part above tolerance.
  explicit HermitianMatrix(const ComplexMatrix& m, double tol = kDefaultTolerance);

  static HermitianMatrix zero(Index dim);
  static HermitianMatrix identity(Index dim);
  static HermitianMatrix diagonal(const RealVector& entries);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }

  HermitianMatrix operator+(const HermitianMatrix& other) const;
  HermitianMatrix operator-(const HermitianMatrix& other) const;
  HermitianMatrix operator*(double s) const;
  friend HermitianMatrix operator*(double s, const HermitianMatrix& h) { return h * s; }

 private:
  struct Unchecked {};
  HermitianMatrix(ComplexMatrix m, Unchecked) : m_(std::move(m)) {}

  ComplexMatrix m_;
};

/// Hermitian, unit-trace, positive semi-definite operator.
class DensityMatrix {
 public:
  static constexpr double kTraceTolerance = 1e-10;
  static constexpr double kPositivityTolerance = 1e-10;

  /// Throws NumericalError when |Tr - 1| > trace_tol or the smallest
  /// eigenvalue is below -positivity_tol.
  explicit DensityMatrix(HermitianMatrix m, double trace_tol = kTraceTolerance,
                         double positivity_tol = kPositivityTolerance);

  /// |psi><psi| / <psi|psi>.
  static DensityMatrix pure(const ComplexVector& psi);
  static DensityMatrix maximally_mixed(Index dim);

  const HermitianMatrix& hermitian() const noexcept { return h_; }
  const ComplexMatrix& matrix() const noexcept { return h_.matrix(); }
  Index dim() const noexcept { return h_.dim(); }

  /// Eigenvalues (ascending), negative round-off clamped to zero.
  const RealVector& eigenvalues() const noexcept { return eigenvalues_; }

 private:
  HermitianMatrix h_;
  RealVector eigenvalues_;
};

struct EigenDecomposition {
  RealVector eigenvalues;      // ascending
  ComplexMatrix eigenvectors;  // unitary, columns are eigenvectors

  ComplexMatrix reconstruct() const;
};

/// M = U diag(lambda) U^dagger with ascending lambda.
EigenDecomposition herm_eig(const HermitianMatrix& m);

/// exp(scale * M). Throws RangeError when scale * lambda exceeds 700.
HermitianMatrix matrix_exp_herm(const HermitianMatrix& m, double scale);

/// Principal logarithm of a positive definite matrix. Throws
/// NotPositiveDefiniteError when an eigenvalue is <= eps_pd.
HermitianMatrix matrix_log_pd(const HermitianMatrix& m, double eps_pd = 1e-300);

/// Kronecker product A (x) B.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

enum class Subsystem { System, Reservoir };

/// Traces out the factor not named by `keep` of a (d_s*d_r)-dimensional
/// operator laid out as system (x) reservoir.
ComplexMatrix partial_trace(const ComplexMatrix& m, Index d_s, Index d_r, Subsystem keep);

ComplexVector vectorize(const ComplexMatrix& m);
ComplexMatrix devectorize(const ComplexVector& v, Index dim);

/// Tr[A B] without forming the product.
Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// Expectation Re Tr[rho A] for Hermitian A.
double expectation(const DensityMatrix& rho, const HermitianMatrix& a);

/// -Tr[rho log rho] with 0 log 0 = 0; eigenvalues below 1e-15 are dropped.
double von_neumann_entropy(const DensityMatrix& rho);

/// D(rho1 || rho2) = Tr[rho1 log rho1] - Tr[rho1 log rho2]; +infinity when
/// rho2 is singular on the support of rho1.
double relative_entropy(const DensityMatrix& rho1, const DensityMatrix& rho2);

namespace pauli {
// Basis ordering |e>, |g>: sigma_z = diag(1, -1), sigma_plus = |e><g|.
ComplexMatrix identity();
ComplexMatrix sigma_x();
ComplexMatrix sigma_y();
ComplexMatrix sigma_z();
ComplexMatrix sigma_plus();
ComplexMatrix sigma_minus();
}  // namespace pauli

}  // namespace strongtherm

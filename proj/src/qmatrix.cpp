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

#include "strongtherm/qmatrix.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "strongtherm/error.hpp"

namespace strongtherm {

namespace {

constexpr double kExpArgumentLimit = 700.0;
constexpr double kEntropyFloor = 1e-15;

template <typename F>
HermitianMatrix spectral_map(const EigenDecomposition& eig, F&& f) {
  const ComplexMatrix& u = eig.eigenvectors;
  RealVector fl = eig.eigenvalues.unaryExpr(f);
  ComplexMatrix out = u * fl.cast<Complex>().asDiagonal() * u.adjoint();
  return HermitianMatrix(0.5 * (out + out.adjoint()), 1.0);
}

}  // namespace

double max_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    std::ostringstream os;
    os << "HermitianMatrix: expected a non-empty square matrix, got " << m.rows() << "x"
       << m.cols();
    throw ShapeError(os.str());
  }
  if (!m.allFinite()) throw NumericalError("HermitianMatrix: non-finite entry");
  const double scale = std::max(1.0, max_norm(m));
  const double asym = max_norm(m - m.adjoint());
  if (asym > tol * scale) {
    std::ostringstream os;
    os << "HermitianMatrix: ||M - M^dagger||_max = " << asym << " exceeds tolerance "
       << tol * scale;
    throw NumericalError(os.str());
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermitianMatrix HermitianMatrix::zero(Index dim) {
  return HermitianMatrix(ComplexMatrix::Zero(dim, dim), Unchecked{});
}

HermitianMatrix HermitianMatrix::identity(Index dim) {
  return HermitianMatrix(ComplexMatrix::Identity(dim, dim), Unchecked{});
}

HermitianMatrix HermitianMatrix::diagonal(const RealVector& entries) {
  return HermitianMatrix(ComplexMatrix(entries.cast<Complex>().asDiagonal()), Unchecked{});
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& other) const {
  if (dim() != other.dim()) throw ShapeError("HermitianMatrix +: dimension mismatch");
  return HermitianMatrix(m_ + other.m_, Unchecked{});
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& other) const {
  if (dim() != other.dim()) throw ShapeError("HermitianMatrix -: dimension mismatch");
  return HermitianMatrix(m_ - other.m_, Unchecked{});
}

HermitianMatrix HermitianMatrix::operator*(double s) const {
  return HermitianMatrix(m_ * s, Unchecked{});
}

DensityMatrix::DensityMatrix(HermitianMatrix m, double trace_tol, double positivity_tol)
    : h_(std::move(m)) {
  const double tr = h_.matrix().trace().real();
  if (std::abs(tr - 1.0) > trace_tol) {
    std::ostringstream os;
    os << "DensityMatrix: trace " << tr << " differs from 1 by more than " << trace_tol;
    throw NumericalError(os.str());
  }
  eigenvalues_ = herm_eig(h_).eigenvalues;
  if (eigenvalues_(0) < -positivity_tol) {
    std::ostringstream os;
    os << "DensityMatrix: minimum eigenvalue " << eigenvalues_(0) << " below -"
       << positivity_tol;
    throw NotPositiveDefiniteError(os.str(), eigenvalues_(0));
  }
  eigenvalues_ = eigenvalues_.cwiseMax(0.0);
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  const double n2 = psi.squaredNorm();
  if (n2 <= 0.0) throw NumericalError("DensityMatrix::pure: zero vector");
  ComplexMatrix p = psi * psi.adjoint() / n2;
  return DensityMatrix(HermitianMatrix(p));
}

DensityMatrix DensityMatrix::maximally_mixed(Index dim) {
  return DensityMatrix(HermitianMatrix::identity(dim) * (1.0 / static_cast<double>(dim)));
}

ComplexMatrix EigenDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

EigenDecomposition herm_eig(const HermitianMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m.matrix());
  if (solver.info() != Eigen::Success) {
    throw NumericalError("herm_eig: Hermitian eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

HermitianMatrix matrix_exp_herm(const HermitianMatrix& m, double scale) {
  if (!std::isfinite(scale)) throw RangeError("matrix_exp_herm: non-finite scale");
  const EigenDecomposition eig = herm_eig(m);
  const double top = std::max(scale * eig.eigenvalues(0),
                              scale * eig.eigenvalues(eig.eigenvalues.size() - 1));
  if (top > kExpArgumentLimit) {
    std::ostringstream os;
    os << "matrix_exp_herm: exponent " << top << " exceeds " << kExpArgumentLimit;
    throw RangeError(os.str());
  }
  return spectral_map(eig, [scale](double l) { return std::exp(scale * l); });
}

HermitianMatrix matrix_log_pd(const HermitianMatrix& m, double eps_pd) {
  const EigenDecomposition eig = herm_eig(m);
  const double lmin = eig.eigenvalues(0);
  if (!(lmin > eps_pd)) {
    std::ostringstream os;
    os << "matrix_log_pd: eigenvalue " << lmin << " is not above " << eps_pd;
    throw NotPositiveDefiniteError(os.str(), lmin);
  }
  return spectral_map(eig, [](double l) { return std::log(l); });
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, Index d_s, Index d_r, Subsystem keep) {
  if (d_s < 1 || d_r < 1 || m.rows() != d_s * d_r || m.cols() != d_s * d_r) {
    std::ostringstream os;
    os << "partial_trace: " << m.rows() << "x" << m.cols() << " operator does not split as "
       << d_s << " x " << d_r;
    throw ShapeError(os.str());
  }
  if (keep == Subsystem::System) {
    ComplexMatrix out = ComplexMatrix::Zero(d_s, d_s);
    for (Index s = 0; s < d_s; ++s)
      for (Index sp = 0; sp < d_s; ++sp)
        for (Index r = 0; r < d_r; ++r) out(s, sp) += m(s * d_r + r, sp * d_r + r);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(d_r, d_r);
  for (Index s = 0; s < d_s; ++s) out += m.block(s * d_r, s * d_r, d_r, d_r);
  return out;
}

ComplexVector vectorize(const ComplexMatrix& m) {
  ComplexVector v(m.size());
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) v(i + m.rows() * j) = m(i, j);
  return v;
}

ComplexMatrix devectorize(const ComplexVector& v, Index dim) {
  if (dim < 1 || v.size() != dim * dim) {
    std::ostringstream os;
    os << "devectorize: length " << v.size() << " is not " << dim << "^2";
    throw ShapeError(os.str());
  }
  ComplexMatrix m(dim, dim);
  for (Index j = 0; j < dim; ++j)
    for (Index i = 0; i < dim; ++i) m(i, j) = v(i + dim * j);
  return m;
}

Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols())
    throw ShapeError("trace_product: incompatible shapes");
  return a.cwiseProduct(b.transpose()).sum();
}

double expectation(const DensityMatrix& rho, const HermitianMatrix& a) {
  return trace_product(rho.matrix(), a.matrix()).real();
}

double von_neumann_entropy(const DensityMatrix& rho) {
  double s = 0.0;
  for (double p : rho.eigenvalues()) {
    if (p > kEntropyFloor) s -= p * std::log(p);
  }
  return s;
}

double relative_entropy(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.dim() != rho2.dim()) throw ShapeError("relative_entropy: dimension mismatch");
  const double neg_s1 = -von_neumann_entropy(rho1);
  const EigenDecomposition e2 = herm_eig(rho2.hermitian());
  // Tr[rho1 log rho2] evaluated in the eigenbasis of rho2.
  const ComplexMatrix rotated = e2.eigenvectors.adjoint() * rho1.matrix() * e2.eigenvectors;
  double cross = 0.0;
  for (Index j = 0; j < e2.eigenvalues.size(); ++j) {
    const double weight = rotated(j, j).real();
    const double q = e2.eigenvalues(j);
    if (q > 1e-300) {
      cross += weight * std::log(q);
    } else if (weight > kEntropyFloor) {
      return std::numeric_limits<double>::infinity();
    }
  }
  return neg_s1 - cross;
}

namespace pauli {

ComplexMatrix identity() { return ComplexMatrix::Identity(2, 2); }

ComplexMatrix sigma_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix sigma_y() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

ComplexMatrix sigma_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

ComplexMatrix sigma_plus() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 0, 0;
  return m;
}

ComplexMatrix sigma_minus() {
  ComplexMatrix m(2, 2);
  m << 0, 0, 1, 0;
  return m;
}

}  // namespace pauli

}  // namespace strongtherm

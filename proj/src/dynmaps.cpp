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

#include "strongtherm/dynmaps.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "strongtherm/error.hpp"

namespace strongtherm {

namespace {

struct MapSpectrum {
  ComplexVector eigenvalues;
  ComplexMatrix vectors;
  double condition = std::numeric_limits<double>::infinity();
};

MapSpectrum map_spectrum(const SuperOperator& s) {
  MapSpectrum out;
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(s.matrix);
  if (solver.info() != Eigen::Success) return out;
  out.eigenvalues = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  Eigen::JacobiSVD<ComplexMatrix> svd(out.vectors);
  const RealVector& sv = svd.singularValues();
  const double smallest = out.eigenvalues.cwiseAbs().minCoeff();
  const double largest = out.eigenvalues.cwiseAbs().maxCoeff();
  if (sv(sv.size() - 1) > 0.0 && smallest > 0.0) {
    out.condition = (sv(0) / sv(sv.size() - 1)) * (largest / smallest);
  }
  return out;
}

}  // namespace

ChoiMatrix choi(const SuperOperator& s) {
  const Index d = s.dim;
  ComplexMatrix c(d * d, d * d);
  // C(a d + i, b d + j) = S(E_ij)(a, b) = M(a + d b, i + d j)
  for (Index a = 0; a < d; ++a)
    for (Index i = 0; i < d; ++i)
      for (Index b = 0; b < d; ++b)
        for (Index j = 0; j < d; ++j) c(a * d + i, b * d + j) = s.matrix(a + d * b, i + d * j);
  return {d, HermitianMatrix(c, 1e-9)};
}

SuperOperator from_choi(const ChoiMatrix& c) {
  const Index d = c.d;
  ComplexMatrix m(d * d, d * d);
  const ComplexMatrix& cm = c.matrix.matrix();
  for (Index a = 0; a < d; ++a)
    for (Index i = 0; i < d; ++i)
      for (Index b = 0; b < d; ++b)
        for (Index j = 0; j < d; ++j) m(a + d * b, i + d * j) = cm(a * d + i, b * d + j);
  SuperOperator s{d, std::move(m), false};
  s.trace_preserving = s.trace_residual() <= 1e-9;
  return s;
}

CptpVerdict is_cptp(const SuperOperator& s, double tol) {
  CptpVerdict v;
  v.min_choi_eigenvalue = herm_eig(choi(s).matrix).eigenvalues(0);
  v.tp_residual = s.trace_residual();
  v.completely_positive = v.min_choi_eigenvalue >= -tol;
  v.trace_preserving = v.tp_residual <= tol;
  return v;
}

double inversion_condition(const SuperOperator& s) { return map_spectrum(s).condition; }

SuperOperator intermediate_map(const SuperOperator& s_t, const SuperOperator& s_s) {
  if (s_t.dim != s_s.dim) throw ShapeError("intermediate_map: dimension mismatch");
  const MapSpectrum spec = map_spectrum(s_s);
  if (!(spec.condition < kMaxInversionCondition)) {
    std::ostringstream os;
    os << "intermediate_map: Lambda_s is singular or ill-conditioned (condition estimate "
       << spec.condition << ")";
    throw InversionError(os.str(), spec.condition);
  }
  const ComplexVector inv = spec.eigenvalues.cwiseInverse();
  const ComplexMatrix s_inv = spec.vectors * inv.asDiagonal() * spec.vectors.inverse();
  SuperOperator out{s_t.dim, s_t.matrix * s_inv, false};
  out.trace_preserving = s_t.trace_preserving && s_s.trace_preserving;
  return out;
}

std::vector<DivisibilityInterval> divisibility_scan(std::span<const double> times,
                                                    std::span<const SuperOperator> maps,
                                                    double tol, ExecutionPolicy policy) {
  if (times.size() != maps.size())
    throw ConfigError("divisibility_scan: times and maps differ in length");
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1]))
      throw ConfigError("divisibility_scan: times must be strictly increasing");
  }
  if (times.size() < 2) return {};
  std::vector<DivisibilityInterval> out(times.size() - 1);
  for_each_index(out.size(), policy, [&](std::size_t k) {
    DivisibilityInterval& iv = out[k];
    iv.t_start = times[k];
    iv.t_end = times[k + 1];
    try {
      iv.verdict = is_cptp(intermediate_map(maps[k + 1], maps[k]), tol);
    } catch (const NumericalError& e) {
      iv.error = e.what();
    }
  });
  return out;
}

}  // namespace strongtherm

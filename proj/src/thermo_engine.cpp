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

#include "thermo_engine.hpp"

#include <cmath>
#include <iterator>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "strongtherm/dynmaps.hpp"
#include "strongtherm/error.hpp"

namespace strongtherm::thermo::detail {

namespace {

HermitianMatrix exponent_at(const Family& fam, const HermitianMatrix& ref, std::size_t k) {
  return fam.exponent_shifts.empty() ? ref : ref + fam.exponent_shifts[k];
}

void check_family(const Family& fam, std::size_t n) {
  if (fam.maps.size() != n || (!fam.exponent_shifts.empty() && fam.exponent_shifts.size() != n))
    throw ShapeError("thermo engine: family does not match the grid");
}

}  // namespace

ThermoTrace run_engine(const EngineInput& in, const DensityMatrix& rho0, double beta,
                       std::span<const double> grid, const ThermoOptions& opts) {
  const std::size_t n = grid.size();
  const BetaStencil st = beta_stencil(beta, opts.derivative);

  // Nominal beta first, then the stencil betas; the builds are independent.
  std::vector<double> family_betas{beta};
  family_betas.insert(family_betas.end(), st.betas.begin(), st.betas.end());
  std::vector<Family> families(family_betas.size());
  for_each_index(families.size(), opts.policy, [&](std::size_t i) {
    families[i] = in.build(family_betas[i]);
    check_family(families[i], n);
  });
  const Family nominal = std::move(families.front());
  const std::vector<Family> shifted(std::make_move_iterator(families.begin() + 1),
                                    std::make_move_iterator(families.end()));
  const HermitianMatrix ref = in.reference(beta);
  std::vector<HermitianMatrix> shifted_refs;
  for (double b : st.betas) shifted_refs.push_back(in.reference_beta_independent ? ref : in.reference(b));

  // t = 0 reference values.
  HermitianMatrix d_ref = HermitianMatrix::zero(ref.dim());
  if (!in.reference_beta_independent)
    for (std::size_t i = 0; i < st.betas.size(); ++i) d_ref = d_ref + shifted_refs[i] * st.weights[i];
  const double s0 = von_neumann_entropy(rho0) + beta * beta * expectation(rho0, d_ref);
  const double e0 = expectation(rho0, ref + d_ref * beta);

  ThermoTrace trace;
  trace.beta = beta;
  trace.points.resize(n);
  trace.states.assign(n, rho0);
  trace.maps = nominal.maps;
  std::vector<double> power(n, 0.0);

  for_each_index(n, opts.policy, [&](std::size_t k) {
    const double t = grid[k];
    try {
      const ComplexMatrix evolved = nominal.maps[k].apply(rho0.matrix());
      const DensityMatrix rho(HermitianMatrix(0.5 * (evolved + evolved.adjoint()), 1e-9), 1e-9,
                              1e-8);
      const HermitianMatrix hc = h_circledast(nominal.maps[k], exponent_at(nominal, ref, k), beta);
      HermitianMatrix dhc = HermitianMatrix::zero(hc.dim());
      for (std::size_t i = 0; i < st.betas.size(); ++i)
        dhc = dhc + h_circledast(shifted[i].maps[k], exponent_at(shifted[i], shifted_refs[i], k),
                                 st.betas[i]) *
                        st.weights[i];
      ThermoPoint& p = trace.points[k];
      p.t = t;
      p.s_vn = von_neumann_entropy(rho);
      const double hc_mean = expectation(rho, hc);
      const double dhc_mean = expectation(rho, dhc);
      p.e_u = hc_mean + beta * dhc_mean;
      p.f = hc_mean - p.s_vn / beta;
      p.s = p.s_vn + beta * beta * dhc_mean;
      p.e_u_weak = expectation(rho, in.h_of_t(t));
      if (in.hdot_of_t) power[k] = expectation(rho, in.hdot_of_t(t));
      trace.states[k] = rho;
    } catch (const NotPositiveDefiniteError& e) {
      std::ostringstream os;
      os << e.what() << " at t = " << t;
      throw NotPositiveDefiniteError(os.str(), e.min_eigenvalue());
    } catch (const NumericalError& e) {
      std::ostringstream os;
      os << e.what() << " at t = " << t;
      throw NumericalError(os.str());
    }
  });

  const std::vector<double> w = cumulative_trapezoid(power, grid);
  std::vector<double> sigma(n);
  for (std::size_t k = 0; k < n; ++k) {
    ThermoPoint& p = trace.points[k];
    p.w = w[k];
    p.q = p.e_u - e0 - p.w;
    p.sigma = p.s - s0 - beta * p.q;
    sigma[k] = p.sigma;
  }
  const std::vector<double> rate = grid_derivative(sigma, grid);
  for (std::size_t k = 0; k < n; ++k) trace.points[k].sigma_rate = rate[k];
  return trace;
}

std::vector<ComplexMatrix> driven_joint_propagators(const spinboson::ModelConfig& cfg,
                                                    const DrivenProtocol& protocol,
                                                    std::span<const double> grid) {
  std::vector<ComplexMatrix> out;
  out.reserve(grid.size());
  out.push_back(ComplexMatrix::Identity(16, 16));
  std::vector<HermitianMatrix> mid;
  mid.reserve(grid.size());
  for (std::size_t k = 1; k < grid.size(); ++k) mid.push_back(protocol.h_of_t(0.5 * (grid[k] + grid[k - 1])));
  // Within a run of identical midpoint Hamiltonians propagate from the run start, not step by step.
  std::size_t k = 1;
  while (k < grid.size()) {
    std::size_t end = k + 1;
    while (end < grid.size() && max_norm(mid[end - 1].matrix() - mid[k - 1].matrix()) == 0.0) ++end;
    const SuperOperator l = build_liouvillian(spinboson::davies_generator(cfg, mid[k - 1]));
    const ComplexMatrix start = out.back();
    if (end == k + 1) {
      out.push_back((l.matrix * (grid[k] - grid[k - 1])).exp() * start);
    } else {
      const LiouvillianExponential gen(l);
      for (std::size_t j = k; j < end; ++j) out.push_back(gen.at(grid[j] - grid[k - 1]).matrix * start);
    }
    k = end;
  }
  return out;
}

SuperOperator factorized_map(const ComplexMatrix& joint, const ComplexMatrix& rho_spin, double t) {
  SuperOperator m = spinboson::reduce_joint_propagator(joint, rho_spin);
  const CptpVerdict v = is_cptp(m, spinboson::kMapChoiTolerance);
  if (!v.completely_positive) {
    std::ostringstream os;
    os << "reduced_map: Choi matrix eigenvalue " << v.min_choi_eigenvalue << " at t = " << t
       << " violates complete positivity";
    throw NumericalError(os.str());
  }
  return m;
}

SuperOperator branch_map(const ComplexMatrix& joint, std::span<const Branch> branches, double t) {
  SuperOperator m{2, ComplexMatrix::Zero(4, 4), true};
  for (const Branch& b : branches) {
    const ComplexMatrix evolved = devectorize(joint * vectorize(b.joint), 4);
    const ComplexMatrix out = partial_trace(evolved, 2, 2, Subsystem::System);
    m.matrix += vectorize(out) * vectorize(b.functional.transpose()).transpose();
  }
  const double residual = m.trace_residual();
  if (residual > 1e-9) {
    std::ostringstream os;
    os << "measured map: trace residual " << residual << " at t = " << t;
    throw NumericalError(os.str());
  }
  const CptpVerdict v = is_cptp(m, kBranchMapChoiTolerance);
  if (!v.completely_positive) {
    std::ostringstream os;
    os << "measured map: Choi matrix eigenvalue " << v.min_choi_eigenvalue << " at t = " << t
       << " violates complete positivity";
    throw NumericalError(os.str());
  }
  return m;
}

}  // namespace strongtherm::thermo::detail

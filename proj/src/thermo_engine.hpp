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

// Internal: the shared evaluation loop behind every thermo pipeline.

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "strongtherm/thermo.hpp"

namespace strongtherm::thermo::detail {

/// Maps on the grid at one inverse temperature. The exponent operator at
/// grid point k is reference(beta) + exponent_shifts[k] (shifts may be empty).
struct Family {
  std::vector<SuperOperator> maps;
  std::vector<HermitianMatrix> exponent_shifts;
};

struct EngineInput {
  std::function<Family(double)> build;
  std::function<HermitianMatrix(double)> reference;
  bool reference_beta_independent = false;
  std::function<HermitianMatrix(double)> h_of_t;
  std::function<HermitianMatrix(double)> hdot_of_t;  // empty: no work
};

ThermoTrace run_engine(const EngineInput& in, const DensityMatrix& rho0, double beta,
                       std::span<const double> grid, const ThermoOptions& opts);

/// Joint propagators exp(L_n dt_n) ... exp(L_1 dt_1) with L_k the Davies
/// generator of H_S at the step midpoint.
std::vector<ComplexMatrix> driven_joint_propagators(const spinboson::ModelConfig& cfg,
                                                    const DrivenProtocol& protocol,
                                                    std::span<const double> grid);

/// X -> Tr_R P(X (x) rho_spin), with the Choi check of ReducedDynamics.
SuperOperator factorized_map(const ComplexMatrix& joint, const ComplexMatrix& rho_spin, double t);

struct Branch {
  ComplexMatrix functional;  // Pi_k
  ComplexMatrix joint;       // J_k
};

inline constexpr double kBranchMapChoiTolerance = 1e-6;

/// X -> sum_k Tr[Pi_k X] Tr_R P(J_k). Throws NumericalError when the map is
/// not trace preserving (1e-9) or not completely positive (1e-6).
SuperOperator branch_map(const ComplexMatrix& joint, std::span<const Branch> branches, double t);

}  // namespace strongtherm::thermo::detail

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

// dynmaps.hpp: Choi matrices, CPTP checks and CP-divisibility scans.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "strongtherm/execution.hpp"
#include "strongtherm/gkls.hpp"
#include "strongtherm/qmatrix.hpp"

namespace strongtherm {

/// C = sum_ij S(E_ij) (x) E_ij, the image of the unnormalized maximally
/// entangled projector. Positive semi-definite iff S is completely positive.
struct ChoiMatrix {
  Index d = 0;
  HermitianMatrix matrix;
};

/// Throws NumericalError when S does not preserve Hermiticity (Choi matrix
/// not Hermitian within 1e-9).
ChoiMatrix choi(const SuperOperator& s);

/// Inverse of choi(): rebuilds the superoperator from a Choi matrix.
SuperOperator from_choi(const ChoiMatrix& c);

struct CptpVerdict {
  bool completely_positive = false;
  bool trace_preserving = false;
  double min_choi_eigenvalue = 0.0;
  double tp_residual = 0.0;

  bool cptp() const { return completely_positive && trace_preserving; }
};

CptpVerdict is_cptp(const SuperOperator& s, double tol);

/// Condition-number ceiling for inverting Lambda_s.
inline constexpr double kMaxInversionCondition = 1e12;

/// Lambda_{t,s} = Lambda_t Lambda_s^-1, inverting through the complex
/// eigendecomposition of Lambda_s. Throws InversionError with the condition
/// estimate when Lambda_s is singular or ill-conditioned.
SuperOperator intermediate_map(const SuperOperator& s_t, const SuperOperator& s_s);

/// Estimated condition number of the eigendecomposition-based inverse.
double inversion_condition(const SuperOperator& s);

struct DivisibilityInterval {
  double t_start = 0.0;
  double t_end = 0.0;
  /// Empty when the intermediate map could not be formed.
  std::optional<CptpVerdict> verdict;
  std::string error;

  bool cp_divisible() const { return verdict && verdict->completely_positive; }
  bool failed() const { return !verdict.has_value(); }
};

/// CPTP verdict of Lambda_{t_{k+1}, t_k} for every consecutive pair. Interval
/// failures (inversion errors) are recorded without aborting the scan. Throws
/// ConfigError when times are not strictly increasing or sizes differ.
std::vector<DivisibilityInterval> divisibility_scan(
    std::span<const double> times, std::span<const SuperOperator> maps, double tol,
    ExecutionPolicy policy = ExecutionPolicy::Parallel);

}  // namespace strongtherm

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

// witness.hpp: negative entropy-production rate as a non-Markovianity
// indicator. The test is one-directional: a negative rate rules out
// CP-divisible dynamics; a non-negative rate certifies nothing.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "strongtherm/dynmaps.hpp"
#include "strongtherm/thermo.hpp"

namespace strongtherm::witness {

struct NegativeRateInterval {
  double t_start = 0.0;
  double t_end = 0.0;
  double min_rate = 0.0;
};

/// One divisibility interval compared with the mean entropy-production rate
/// over it, (sigma(t_end) - sigma(t_start)) / (t_end - t_start), sigma
/// linearly interpolated on the trace grid.
struct DivisibilityCheck {
  double t_start = 0.0;
  double t_end = 0.0;
  bool cp_divisible = false;
  bool scan_failed = false;
  double interval_rate = 0.0;
  /// False only when the interval is CP-divisible and the rate still drops
  /// below -kDivisibleRateTolerance.
  bool consistent = true;
};

inline constexpr double kDefaultThreshold = 1e-6;
inline constexpr double kDivisibleRateTolerance = 1e-8;

struct WitnessReport {
  double threshold = kDefaultThreshold;
  std::vector<NegativeRateInterval> intervals;
  double total_negative_area = 0.0;
  std::vector<DivisibilityCheck> divisibility;

  bool negative_rate_found() const { return !intervals.empty(); }
  std::size_t non_cp_intervals() const;
  std::size_t inconsistent_intervals() const;
  std::string summary() const;
};

/// Maximal runs of grid points with sigma_rate < -threshold. Each interval
/// spans from its first to its last offending grid point. Throws ConfigError
/// for fewer than three points or a non-positive threshold.
WitnessReport detect_negative_rate(std::span<const thermo::ThermoPoint> points,
                                   double threshold = kDefaultThreshold,
                                   std::span<const DivisibilityInterval> scan = {});

/// detect_negative_rate plus a divisibility scan of trace.maps.
WitnessReport analyze(const thermo::ThermoTrace& trace, double threshold = kDefaultThreshold,
                      double cp_tol = 1e-9, ExecutionPolicy policy = ExecutionPolicy::Parallel);

}  // namespace strongtherm::witness

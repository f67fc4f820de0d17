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

#include "strongtherm/witness.hpp"

#include <algorithm>
#include <sstream>

#include "strongtherm/error.hpp"

namespace strongtherm::witness {

namespace {

double sigma_at(std::span<const thermo::ThermoPoint> points, double t) {
  if (t <= points.front().t) return points.front().sigma;
  if (t >= points.back().t) return points.back().sigma;
  const auto hi = std::lower_bound(points.begin(), points.end(), t,
                                   [](const thermo::ThermoPoint& p, double v) { return p.t < v; });
  if (hi->t == t) return hi->sigma;
  const auto lo = hi - 1;
  const double w = (t - lo->t) / (hi->t - lo->t);
  return (1.0 - w) * lo->sigma + w * hi->sigma;
}

}  // namespace

std::size_t WitnessReport::non_cp_intervals() const {
  return static_cast<std::size_t>(std::count_if(
      divisibility.begin(), divisibility.end(),
      [](const DivisibilityCheck& c) { return !c.scan_failed && !c.cp_divisible; }));
}

std::size_t WitnessReport::inconsistent_intervals() const {
  return static_cast<std::size_t>(std::count_if(divisibility.begin(), divisibility.end(),
                                                [](const DivisibilityCheck& c) { return !c.consistent; }));
}

std::string WitnessReport::summary() const {
  std::ostringstream os;
  if (negative_rate_found()) {
    os << intervals.size() << " interval(s) with entropy-production rate below -" << threshold
       << " (negative area " << total_negative_area
       << "): the dynamics is not CP-divisible, hence non-Markovian.";
  } else {
    os << "No entropy-production rate below -" << threshold
       << ". This does not certify Markovian dynamics.";
  }
  if (!divisibility.empty()) {
    os << " Divisibility scan: " << non_cp_intervals() << " of " << divisibility.size()
       << " intermediate maps not completely positive";
    const std::size_t bad = inconsistent_intervals();
    if (bad > 0) os << ", " << bad << " CP-divisible interval(s) with a negative rate";
    os << '.';
  }
  return os.str();
}

WitnessReport detect_negative_rate(std::span<const thermo::ThermoPoint> points, double threshold,
                                   std::span<const DivisibilityInterval> scan) {
  if (points.size() < 3) throw ConfigError("detect_negative_rate: need at least three grid points");
  if (!(threshold > 0.0)) throw ConfigError("detect_negative_rate: threshold must be positive");

  WitnessReport r;
  r.threshold = threshold;
  std::optional<NegativeRateInterval> open;
  for (const thermo::ThermoPoint& p : points) {
    if (p.sigma_rate < -threshold) {
      if (!open) open = NegativeRateInterval{p.t, p.t, p.sigma_rate};
      open->t_end = p.t;
      open->min_rate = std::min(open->min_rate, p.sigma_rate);
    } else if (open) {
      r.intervals.push_back(*open);
      open.reset();
    }
  }
  if (open) r.intervals.push_back(*open);

  for (std::size_t k = 1; k < points.size(); ++k) {
    const double a = std::max(0.0, -points[k - 1].sigma_rate);
    const double b = std::max(0.0, -points[k].sigma_rate);
    r.total_negative_area += 0.5 * (points[k].t - points[k - 1].t) * (a + b);
  }

  for (const DivisibilityInterval& iv : scan) {
    DivisibilityCheck c;
    c.t_start = iv.t_start;
    c.t_end = iv.t_end;
    c.scan_failed = iv.failed();
    c.cp_divisible = iv.cp_divisible();
    c.interval_rate = (sigma_at(points, iv.t_end) - sigma_at(points, iv.t_start)) /
                      (iv.t_end - iv.t_start);
    c.consistent = !(c.cp_divisible && c.interval_rate < -kDivisibleRateTolerance);
    r.divisibility.push_back(c);
  }
  return r;
}

WitnessReport analyze(const thermo::ThermoTrace& trace, double threshold, double cp_tol,
                      ExecutionPolicy policy) {
  std::vector<double> times;
  times.reserve(trace.points.size());
  for (const thermo::ThermoPoint& p : trace.points) times.push_back(p.t);
  const std::vector<DivisibilityInterval> scan =
      divisibility_scan(times, trace.maps, cp_tol, policy);
  return detect_negative_rate(trace.points, threshold, scan);
}

}  // namespace strongtherm::witness

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

#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace strongtherm {

/// Selects the OpenMP kernel or the serial reference loop. Both produce
/// identical results; the serial path is kept for testing and benchmarking.
enum class ExecutionPolicy { Serial, Parallel };

/// Runs body(i) for i in [0, n). Under Parallel the iterations are spread
/// over OpenMP threads; the first exception thrown by any iteration is
/// rethrown on the calling thread after the loop.
template <typename Body>
void for_each_index(std::size_t n, ExecutionPolicy policy, Body&& body) {
  if (policy == ExecutionPolicy::Serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr first;
  std::mutex guard;
  const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 8)
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (!first) first = std::current_exception();
    }
  }
  if (first) std::rethrow_exception(first);
}

}  // namespace strongtherm

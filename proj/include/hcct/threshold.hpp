// Copyright 2026 The hcct Authors
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

#include <cmath>
#include <cstdint>

namespace hcct {

/// floor(phi * n). With `min_one`, a zero floor is lifted to 1 so that a
/// context has to occur at least once to be hot.
inline std::uint64_t hot_threshold(double phi, std::uint64_t n,
                                   bool min_one = true) {
  auto t = static_cast<std::uint64_t>(std::floor(phi * static_cast<double>(n)));
  if (min_one && t == 0) t = 1;
  return t;
}

/// floor((phi - eps) * n): contexts at or below this frequency must never be
/// reported.
inline std::uint64_t false_positive_ceiling(double phi, double eps,
                                            std::uint64_t n) {
  double v = std::floor((phi - eps) * static_cast<double>(n));
  return v <= 0.0 ? 0 : static_cast<std::uint64_t>(v);
}

/// Throws InvalidThreshold unless 0 < eps < phi <= 1.
void check_phi_eps(double phi, double eps);

}  // namespace hcct

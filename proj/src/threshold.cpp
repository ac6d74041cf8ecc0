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

#include "hcct/threshold.hpp"

#include <string>

#include "hcct/errors.hpp"

namespace hcct {

void check_phi_eps(double phi, double eps) {
  if (!(eps > 0.0) || !(phi > eps) || !(phi <= 1.0)) {
    throw InvalidThreshold("need 0 < epsilon < phi <= 1 (phi=" +
                           std::to_string(phi) + ", epsilon=" +
                           std::to_string(eps) + ")");
  }
}

}  // namespace hcct

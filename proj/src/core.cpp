// Copyright 2026 The dflearn Authors.
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

#include "dfl/core.hpp"

#include <cmath>

namespace dfl {

std::string to_string(Sense sense) {
  return sense == Sense::minimize ? "minimize" : "maximize";
}

std::string to_string(Family family) {
  switch (family) {
    case Family::knapsack:
      return "knapsack";
    case Family::lp:
      return "lp";
    case Family::milp_scheduling:
      return "milp-scheduling";
  }
  return "unknown";
}

void check_finite(const CoeffVector& coeffs, const char* what) {
  if (!coeffs.allFinite()) {
    throw DimensionError(std::string(what) + ": non-finite coefficient");
  }
}

CoeffVector canonicalize(Sense sense, const CoeffVector& coeffs, Eigen::Index expected_size) {
  if (coeffs.size() != expected_size) {
    throw DimensionError("canonicalize: expected " + std::to_string(expected_size) +
                         " coefficients, got " + std::to_string(coeffs.size()));
  }
  if (sense == Sense::minimize) return coeffs;
  return -coeffs;
}

}  // namespace dfl

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

#ifndef DFL_KNAPSACK_HPP_
#define DFL_KNAPSACK_HPP_

#include "dfl/core.hpp"

#include <vector>

namespace dfl {

/// Observed part of a 0-1 knapsack: integer weights and capacity. Values are
/// supplied per call. Items heavier than the capacity are never selected.
struct KnapsackData {
  std::vector<int> weights;
  int capacity = 0;

  int item_count() const { return static_cast<int>(weights.size()); }
  void validate() const;
};

/// Unweighted knapsack: every weight is 1.
KnapsackData unit_knapsack(int item_count, int capacity);

// All three oracles work in maximization sense: the returned objective is
// values . assignment. Items with nonpositive value are never selected.

/// Exact 0-1 knapsack by dynamic programming over capacity. Among optimal
/// subsets the lexicographically smallest assignment is returned.
SolutionVector solve_exact(const KnapsackData& data, const CoeffVector& values);

/// Dantzig's greedy: descending value/weight ratio (ties to the lower index),
/// taking every item that still fits.
SolutionVector solve_greedy(const KnapsackData& data, const CoeffVector& values);

/// LP relaxation via the fractional greedy rule; at most one entry is
/// fractional.
SolutionVector solve_relaxation(const KnapsackData& data, const CoeffVector& values);

}  // namespace dfl

#endif  // DFL_KNAPSACK_HPP_

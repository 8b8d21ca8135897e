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

#ifndef DFL_MIP_HPP_
#define DFL_MIP_HPP_

#include "dfl/core.hpp"
#include "dfl/lp.hpp"

#include <optional>
#include <shared_mutex>
#include <vector>

namespace dfl {

struct MipConfig {
  /// Relative gap (incumbent - best_bound) / max(1e-9, |incumbent|) at which
  /// the search stops. Zero proves optimality.
  double gap_tolerance = 0.0;
  /// Known feasible solution; seeds the incumbent.
  std::optional<SolutionVector> incumbent;
  /// Objective value of some feasible solution. Nodes whose relaxation is
  /// strictly worse are pruned.
  std::optional<double> objective_bound;
  std::optional<long> node_limit;
};

struct MipStats {
  long nodes = 0;
  long lp_iterations = 0;
  double best_bound = 0.0;
  double gap = 0.0;
  bool used_given_incumbent = false;
};

/// Best-first branch-and-bound over LP relaxations. Branches on the most
/// fractional variable (ties to the lowest index); the down branch is
/// created, and on equal bounds explored, first.
///
/// Throws SolverError when the problem is infeasible or when the node limit
/// is reached before any incumbent exists.
SolutionVector solve_mip(const LpProblem& problem, const std::vector<bool>& integral_mask,
                         const MipConfig& config, MipStats* stats = nullptr);

double relative_gap(double incumbent, double best_bound);

/// Previously computed solutions of one constraint structure. Any of them is
/// feasible for every objective, so the best one under new coefficients is a
/// valid incumbent. Concurrent lookups, serialized inserts.
class SolutionPool {
 public:
  void insert(const SolutionVector& solution);
  /// Best pooled solution under `coeffs` (minimize coeffs . profile), with
  /// its objective re-evaluated; empty when the pool is empty.
  std::optional<SolutionVector> best(const CoeffVector& coeffs) const;
  std::size_t size() const;

 private:
  mutable std::shared_mutex mutex_;
  std::vector<SolutionVector> solutions_;
};

std::optional<SolutionVector> warmstart_pool_lookup(const SolutionPool& pool,
                                                    const CoeffVector& coeffs);

}  // namespace dfl

#endif  // DFL_MIP_HPP_

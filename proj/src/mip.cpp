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

#include "dfl/mip.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <queue>
#include <sstream>

namespace dfl {
namespace {

constexpr double kIntegralityTol = 1e-6;

struct Node {
  double bound;
  long id;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  Eigen::Index branch;
  double value;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

bool improves(double value, double reference) {
  if (!std::isfinite(reference)) return value < reference;
  return value < reference - 1e-9 * (1.0 + std::abs(reference));
}

}  // namespace

double relative_gap(double incumbent, double best_bound) {
  return (incumbent - best_bound) / std::max(1e-9, std::abs(incumbent));
}

SolutionVector solve_mip(const LpProblem& problem, const std::vector<bool>& integral_mask,
                         const MipConfig& config, MipStats* stats) {
  const auto start = std::chrono::steady_clock::now();
  problem.validate();
  const Eigen::Index n = problem.variable_count();
  if (static_cast<Eigen::Index>(integral_mask.size()) != n) {
    throw DimensionError("solve_mip: integral mask size mismatch");
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (integral_mask[j] && (problem.lower[j] < 0.0 || problem.upper[j] > 1.0)) {
      throw ModelError("solve_mip: integral variable " + std::to_string(j) +
                       " must have bounds within [0, 1]");
    }
  }

  MipStats local;
  double incumbent_value = std::numeric_limits<double>::infinity();
  Eigen::VectorXd incumbent;
  if (config.incumbent) {
    if (config.incumbent->assignment.size() != n) {
      throw DimensionError("solve_mip: incumbent size mismatch");
    }
    incumbent = config.incumbent->assignment;
    incumbent_value = problem.objective.dot(incumbent);
    local.used_given_incumbent = true;
  }
  const double cutoff = config.objective_bound.value_or(std::numeric_limits<double>::infinity());

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  long next_id = 0;
  LpProblem node_problem = problem;

  // Solves the relaxation of a node, then either records an integral
  // solution or queues the node for branching.
  auto evaluate = [&](Eigen::VectorXd lower, Eigen::VectorXd upper) {
    if (config.node_limit && local.nodes >= *config.node_limit) return;
    ++local.nodes;
    node_problem.lower = lower;
    node_problem.upper = upper;
    Simplex simplex(node_problem);
    auto result = simplex.solve();
    local.lp_iterations += result.iterations;
    if (result.status == LpStatus::infeasible) return;
    if (result.status == LpStatus::unbounded) {
      throw SolverError(SolverError::Kind::unbounded, "solve_mip: relaxation is unbounded");
    }
    const double z = result.objective;
    if (!improves(z, incumbent_value)) return;
    if (std::isfinite(cutoff) && z > cutoff + 1e-9 * (1.0 + std::abs(cutoff))) return;

    Eigen::Index branch = -1;
    double most = kIntegralityTol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!integral_mask[j]) continue;
      const double frac = std::min(result.x[j] - std::floor(result.x[j]),
                                   std::ceil(result.x[j]) - result.x[j]);
      if (frac > most + 1e-12) {
        most = frac;
        branch = j;
      }
    }
    if (branch < 0) {
      Eigen::VectorXd x = result.x;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (integral_mask[j]) x[j] = std::round(x[j]);
      }
      const double value = problem.objective.dot(x);
      if (improves(value, incumbent_value)) {
        incumbent = std::move(x);
        incumbent_value = value;
        local.used_given_incumbent = false;
      }
      return;
    }
    open.push(Node{z, next_id++, std::move(lower), std::move(upper), branch, result.x[branch]});
  };

  evaluate(problem.lower, problem.upper);
  double best_bound = open.empty() ? incumbent_value : open.top().bound;

  while (!open.empty()) {
    // Drop nodes that can no longer improve on the incumbent.
    if (!improves(open.top().bound, incumbent_value)) {
      open.pop();
      continue;
    }
    best_bound = open.top().bound;
    if (std::isfinite(incumbent_value) &&
        relative_gap(incumbent_value, best_bound) <= config.gap_tolerance) {
      break;
    }
    if (config.node_limit && local.nodes >= *config.node_limit) break;

    Node node = open.top();
    open.pop();
    Eigen::VectorXd down_upper = node.upper;
    down_upper[node.branch] = std::floor(node.value);
    evaluate(node.lower, std::move(down_upper));
    Eigen::VectorXd up_lower = node.lower;
    up_lower[node.branch] = std::ceil(node.value);
    evaluate(std::move(up_lower), node.upper);
  }
  if (open.empty()) best_bound = incumbent_value;

  if (!std::isfinite(incumbent_value)) {
    if (config.node_limit && local.nodes >= *config.node_limit) {
      throw SolverError(SolverError::Kind::node_limit,
                        "solve_mip: node limit reached without an incumbent");
    }
    throw SolverError(SolverError::Kind::infeasible, "solve_mip: problem is infeasible");
  }
  local.best_bound = std::min(best_bound, incumbent_value);
  local.gap = relative_gap(incumbent_value, local.best_bound);
  if (stats) *stats = local;

  SolutionVector sol;
  sol.objective_value = incumbent_value;
  sol.profile = incumbent;
  sol.assignment = std::move(incumbent);
  std::ostringstream name;
  if (config.gap_tolerance > 0.0) {
    name << "mip-gap:" << config.gap_tolerance;
  } else {
    name << "mip";
  }
  sol.solved_with = name.str();
  sol.solve_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sol;
}

void SolutionPool::insert(const SolutionVector& solution) {
  std::unique_lock lock(mutex_);
  for (const auto& s : solutions_) {
    if (s.assignment.size() == solution.assignment.size() &&
        (s.assignment - solution.assignment).cwiseAbs().maxCoeff() <= 1e-9) {
      return;
    }
  }
  solutions_.push_back(solution);
}

std::optional<SolutionVector> SolutionPool::best(const CoeffVector& coeffs) const {
  std::shared_lock lock(mutex_);
  const SolutionVector* best = nullptr;
  double best_value = std::numeric_limits<double>::infinity();
  for (const auto& s : solutions_) {
    if (s.profile.size() != coeffs.size()) {
      throw DimensionError("SolutionPool: coefficient size mismatch");
    }
    const double value = coeffs.dot(s.profile);
    if (value < best_value) {
      best_value = value;
      best = &s;
    }
  }
  if (!best) return std::nullopt;
  SolutionVector out = *best;
  out.objective_value = best_value;
  return out;
}

std::size_t SolutionPool::size() const {
  std::shared_lock lock(mutex_);
  return solutions_.size();
}

std::optional<SolutionVector> warmstart_pool_lookup(const SolutionPool& pool,
                                                    const CoeffVector& coeffs) {
  return pool.best(coeffs);
}

}  // namespace dfl

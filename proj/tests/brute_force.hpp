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

// Independent reference solvers used only by tests: exhaustive enumeration
// of knapsack subsets, LP vertices and schedules. None of them share code
// with the library's solvers. Also the random instance generators shared by
// the property tests.

#ifndef DFL_TESTS_BRUTE_FORCE_HPP_
#define DFL_TESTS_BRUTE_FORCE_HPP_

#include "dfl/knapsack.hpp"
#include "dfl/lp.hpp"
#include "dfl/scheduling.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <vector>

namespace dfl::testing {

struct KnapsackOptimum {
  double value = 0.0;
  Eigen::VectorXd x;
};

/// Maximum of values . x over all subsets that fit. Sums run in index order.
inline KnapsackOptimum enumerate_knapsack(const Eigen::VectorXd& values,
                                          const std::vector<int>& weights, int capacity) {
  const int n = static_cast<int>(weights.size());
  KnapsackOptimum best{0.0, Eigen::VectorXd::Zero(n)};
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    int weight = 0;
    double value = 0.0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        weight += weights[i];
        value += values[i];
      }
    }
    if (weight <= capacity && value > best.value) {
      best.value = value;
      for (int i = 0; i < n; ++i) best.x[i] = (mask >> i) & 1u;
    }
  }
  return best;
}

/// Minimum of a bounded LP with at most a handful of variables, by
/// enumerating every choice of n active constraints (rows or bounds).
inline std::optional<double> enumerate_lp_vertices(const LpProblem& lp) {
  const Eigen::Index n = lp.variable_count();
  const Eigen::Index m = lp.row_count();
  std::vector<Eigen::RowVectorXd> planes;
  std::vector<double> rhs;
  for (Eigen::Index i = 0; i < m; ++i) {
    planes.push_back(lp.rows.row(i));
    rhs.push_back(lp.rhs[i]);
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(n);
    e[j] = 1.0;
    planes.push_back(e);
    rhs.push_back(lp.lower[j]);
    if (std::isfinite(lp.upper[j])) {
      planes.push_back(e);
      rhs.push_back(lp.upper[j]);
    }
  }
  const int k = static_cast<int>(planes.size());
  std::optional<double> best;
  std::vector<int> pick(static_cast<std::size_t>(n));
  // Iterate over all n-subsets of the k planes.
  std::vector<bool> select(static_cast<std::size_t>(k), false);
  std::fill(select.end() - n, select.end(), true);
  do {
    Eigen::MatrixXd a(n, n);
    Eigen::VectorXd b(n);
    int r = 0;
    for (int p = 0; p < k; ++p) {
      if (!select[p]) continue;
      a.row(r) = planes[p];
      b[r] = rhs[p];
      ++r;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (lu.rank() < n) continue;
    const Eigen::VectorXd x = lu.solve(b);
    bool feasible = true;
    for (Eigen::Index j = 0; j < n && feasible; ++j) {
      feasible = x[j] >= lp.lower[j] - 1e-9 && x[j] <= lp.upper[j] + 1e-9;
    }
    for (Eigen::Index i = 0; i < m && feasible; ++i) {
      const double lhs = lp.rows.row(i).dot(x);
      switch (lp.relations[i]) {
        case Relation::less_equal:
          feasible = lhs <= lp.rhs[i] + 1e-9;
          break;
        case Relation::greater_equal:
          feasible = lhs >= lp.rhs[i] - 1e-9;
          break;
        case Relation::equal:
          feasible = std::abs(lhs - lp.rhs[i]) <= 1e-9;
          break;
      }
    }
    if (!feasible) continue;
    const double value = lp.objective.dot(x);
    if (!best || value < *best) best = value;
  } while (std::next_permutation(select.begin(), select.end()));
  return best;
}

/// Minimum cost schedule by enumerating every (machine, start) choice for
/// every task. Reads only the raw instance.
inline std::optional<double> enumerate_schedules(const SchedulingInstance& inst,
                                                 const Eigen::VectorXd& prices) {
  struct Option {
    int machine;
    int start;
  };
  std::vector<std::vector<Option>> options(inst.tasks.size());
  for (std::size_t j = 0; j < inst.tasks.size(); ++j) {
    const Task& t = inst.tasks[j];
    for (int m = 0; m < inst.machine_count(); ++m) {
      for (int s = t.earliest_start; s + t.duration <= t.latest_end; ++s) {
        options[j].push_back({m, s});
      }
    }
  }
  std::optional<double> best;
  std::vector<std::size_t> choice(inst.tasks.size(), 0);
  for (;;) {
    std::vector<int> load(static_cast<std::size_t>(inst.machine_count() * inst.horizon), 0);
    bool ok = true;
    double cost = 0.0;
    for (std::size_t j = 0; j < inst.tasks.size() && ok; ++j) {
      const Task& t = inst.tasks[j];
      const Option& o = options[j][choice[j]];
      for (int s = o.start; s < o.start + t.duration; ++s) {
        int& l = load[static_cast<std::size_t>(o.machine * inst.horizon + s)];
        l += t.requirement;
        if (l > inst.capacities[o.machine]) ok = false;
        cost += t.power * prices[s];
      }
    }
    if (ok && (!best || cost < *best)) best = cost;
    std::size_t j = 0;
    while (j < choice.size() && ++choice[j] == options[j].size()) {
      choice[j] = 0;
      ++j;
    }
    if (j == choice.size()) break;
  }
  return best;
}

/// Small random scheduling instance whose time-indexed model has at most
/// `max_binaries` start variables.
inline SchedulingInstance random_toy_schedule(std::mt19937_64& rng, int max_binaries) {
  auto uni = [&rng](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  for (;;) {
    SchedulingInstance inst;
    inst.horizon = uni(3, 6);
    const int machines = uni(1, 2);
    inst.capacities.assign(static_cast<std::size_t>(machines), uni(1, 3));
    const int tasks = uni(1, 4);
    int binaries = 0;
    for (int j = 0; j < tasks; ++j) {
      Task t;
      t.duration = uni(1, 2);
      t.earliest_start = uni(0, inst.horizon - t.duration);
      t.latest_end = uni(t.earliest_start + t.duration, inst.horizon);
      t.requirement = uni(1, inst.capacities[0]);
      t.power = uni(1, 5);
      binaries += machines * (t.latest_end - t.earliest_start - t.duration + 1);
      inst.tasks.push_back(t);
    }
    if (binaries <= max_binaries) return inst;
  }
}

struct RandomKnapsack {
  KnapsackData data;
  CoeffVector values;
};

/// Up to 15 items with weights from {1,3,5,7} and integer values of mixed
/// sign.
inline RandomKnapsack random_knapsack(std::mt19937_64& rng) {
  const int weights[] = {1, 3, 5, 7};
  const int n = std::uniform_int_distribution<int>(1, 15)(rng);
  RandomKnapsack k;
  k.values.resize(n);
  for (int i = 0; i < n; ++i) {
    k.data.weights.push_back(weights[std::uniform_int_distribution<int>(0, 3)(rng)]);
    k.values[i] = std::uniform_int_distribution<int>(-20, 40)(rng);
  }
  k.data.capacity = std::uniform_int_distribution<int>(1, 4 * n)(rng);
  return k;
}

/// One to three bounded variables and one to four rows of mixed relations.
inline LpProblem random_small_lp(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-5, 5);
  const int n = std::uniform_int_distribution<int>(1, 3)(rng);
  const int m = std::uniform_int_distribution<int>(1, 4)(rng);
  LpProblem lp(n);
  for (int j = 0; j < n; ++j) {
    lp.lower[j] = std::uniform_int_distribution<int>(-2, 1)(rng);
    lp.upper[j] = lp.lower[j] + std::uniform_int_distribution<int>(0, 5)(rng);
    lp.objective[j] = coef(rng);
  }
  for (int i = 0; i < m; ++i) {
    Eigen::VectorXd row(n);
    for (int j = 0; j < n; ++j) row[j] = coef(rng);
    const int rel = std::uniform_int_distribution<int>(0, 5)(rng);
    const Relation r = rel < 3 ? Relation::less_equal
                               : (rel < 5 ? Relation::greater_equal : Relation::equal);
    lp.add_row(row, r, coef(rng));
  }
  return lp;
}

}  // namespace dfl::testing

#endif  // DFL_TESTS_BRUTE_FORCE_HPP_

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

#include "dfl/knapsack.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

namespace dfl {
namespace {

using Clock = std::chrono::steady_clock;

void check_values(const KnapsackData& data, const CoeffVector& values) {
  if (values.size() != data.item_count()) {
    throw DimensionError("knapsack: " + std::to_string(values.size()) + " values for " +
                         std::to_string(data.item_count()) + " items");
  }
  check_finite(values, "knapsack values");
}

SolutionVector finish(Eigen::VectorXd x, const CoeffVector& values, const char* name,
                      Clock::time_point start) {
  SolutionVector sol;
  sol.objective_value = values.dot(x);
  sol.profile = x;
  sol.assignment = std::move(x);
  sol.solved_with = name;
  sol.solve_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return sol;
}

// Value/weight descending, ties by lower index: a strict total order.
struct RatioBefore {
  const KnapsackData& data;
  const CoeffVector& values;
  bool operator()(int a, int b) const {
    // a/wa > b/wb  <=>  a*wb > b*wa  (weights positive)
    const double lhs = values[a] * data.weights[b];
    const double rhs = values[b] * data.weights[a];
    return lhs > rhs || (lhs == rhs && a < b);
  }
};

std::vector<int> positive_items(const KnapsackData& data, const CoeffVector& values) {
  std::vector<int> items;
  items.reserve(data.weights.size());
  for (int i = 0; i < data.item_count(); ++i) {
    if (values[i] > 0.0) items.push_back(i);
  }
  return items;
}

// Items with positive value in ratio order.
std::vector<int> ratio_order(const KnapsackData& data, const CoeffVector& values) {
  std::vector<int> order = positive_items(data, values);
  std::sort(order.begin(), order.end(), RatioBefore{data, values});
  return order;
}

}  // namespace

void KnapsackData::validate() const {
  if (weights.empty()) throw ModelError("knapsack: no items");
  if (capacity <= 0) throw ModelError("knapsack: capacity must be positive");
  for (int w : weights) {
    if (w <= 0) throw ModelError("knapsack: weights must be positive");
  }
}

KnapsackData unit_knapsack(int item_count, int capacity) {
  KnapsackData data{std::vector<int>(static_cast<std::size_t>(item_count), 1), capacity};
  data.validate();
  return data;
}

SolutionVector solve_exact(const KnapsackData& data, const CoeffVector& values) {
  const auto start = Clock::now();
  check_values(data, values);
  const int n = data.item_count();
  const int cap = data.capacity;

  std::vector<int> items;
  for (int i = 0; i < n; ++i) {
    if (values[i] > 0.0 && data.weights[i] <= cap) items.push_back(i);
  }
  const int k = static_cast<int>(items.size());

  // best[j][c]: best value using items[j..k) with remaining capacity c. Filled
  // backwards so the forward reconstruction can prefer x=0 on ties, which
  // yields the lexicographically smallest optimal assignment.
  std::vector<double> best(static_cast<std::size_t>(k + 1) * (cap + 1), 0.0);
  auto at = [&](int j, int c) -> double& {
    return best[static_cast<std::size_t>(j) * (cap + 1) + c];
  };
  for (int j = k - 1; j >= 0; --j) {
    const int w = data.weights[items[j]];
    const double v = values[items[j]];
    for (int c = 0; c <= cap; ++c) {
      double skip = at(j + 1, c);
      at(j, c) = (c >= w) ? std::max(skip, at(j + 1, c - w) + v) : skip;
    }
  }

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  int c = cap;
  for (int j = 0; j < k; ++j) {
    const int w = data.weights[items[j]];
    if (c >= w && at(j + 1, c - w) + values[items[j]] > at(j + 1, c)) {
      x[items[j]] = 1.0;
      c -= w;
    }
  }
  return finish(std::move(x), values, "knap-exact", start);
}

SolutionVector solve_greedy(const KnapsackData& data, const CoeffVector& values) {
  const auto start = Clock::now();
  check_values(data, values);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(data.item_count());
  int room = data.capacity;
  for (int i : ratio_order(data, values)) {
    if (data.weights[i] <= room) {
      x[i] = 1.0;
      room -= data.weights[i];
    }
  }
  return finish(std::move(x), values, "knap-greedy", start);
}

SolutionVector solve_relaxation(const KnapsackData& data, const CoeffVector& values) {
  const auto start = Clock::now();
  check_values(data, values);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(data.item_count());
  double room = data.capacity;
  // Only the items that fit before the capacity runs out are ever ordered.
  std::vector<int> heap = positive_items(data, values);
  const auto after = [before = RatioBefore{data, values}](int a, int b) { return before(b, a); };
  std::make_heap(heap.begin(), heap.end(), after);
  while (!heap.empty() && room > 0.0) {
    std::pop_heap(heap.begin(), heap.end(), after);
    const int i = heap.back();
    heap.pop_back();
    const double w = data.weights[i];
    if (w <= room) {
      x[i] = 1.0;
      room -= w;
    } else {
      x[i] = room / w;
      room = 0.0;
    }
  }
  return finish(std::move(x), values, "knap-relax", start);
}

}  // namespace dfl

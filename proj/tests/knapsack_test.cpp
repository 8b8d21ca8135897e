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
#include "dfl/lp.hpp"

#include "brute_force.hpp"

#include <gtest/gtest.h>

#include <random>

namespace dfl {
namespace {

CoeffVector vec(std::initializer_list<double> v) {
  CoeffVector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

const KnapsackData kThreeItems{{5, 4, 3}, 7};

TEST(SolveExact, ThreeItemExample) {
  const auto sol = solve_exact(kThreeItems, vec({10, 7, 4}));
  EXPECT_EQ(sol.assignment, vec({0, 1, 1}));
  EXPECT_EQ(sol.objective_value, 11.0);
  EXPECT_EQ(testing::enumerate_knapsack(vec({10, 7, 4}), kThreeItems.weights, 7).value, 11.0);
}

TEST(SolveExact, NonpositiveValuesNeverSelected) {
  const KnapsackData data{{2, 3}, 10};
  const auto sol = solve_exact(data, vec({-1, -2}));
  EXPECT_EQ(sol.assignment, vec({0, 0}));
  EXPECT_EQ(sol.objective_value, 0.0);
}

TEST(SolveExact, MixedSignImage) {
  const auto sol = solve_exact(kThreeItems, vec({10, 2, 4}));
  EXPECT_EQ(sol.assignment, vec({1, 0, 0}));
  EXPECT_EQ(sol.objective_value, 10.0);
}

TEST(SolveExact, PrefersLexicographicallySmallestOnTies) {
  // {0} and {1} both worth 5.
  const KnapsackData data{{1, 1}, 1};
  EXPECT_EQ(solve_exact(data, vec({5, 5})).assignment, vec({0, 1}));
}

TEST(SolveExact, RejectsWrongLength) {
  EXPECT_THROW(solve_exact(kThreeItems, vec({1, 2})), DimensionError);
}

TEST(SolveGreedy, ThreeItemExample) {
  const auto sol = solve_greedy(kThreeItems, vec({10, 7, 4}));
  EXPECT_EQ(sol.assignment, vec({1, 0, 0}));
  EXPECT_EQ(sol.objective_value, 10.0);
}

TEST(SolveGreedy, UnconstrainedTakesAllPositive) {
  const KnapsackData data{{1, 2, 3, 4}, 100};
  EXPECT_EQ(solve_greedy(data, vec({3, -1, 2, 0})).assignment, vec({1, 0, 1, 0}));
}

TEST(SolveGreedy, EqualValuesFollowRatioOrder) {
  const KnapsackData data{{3, 5, 7}, 3};
  EXPECT_EQ(solve_greedy(data, vec({1, 1, 1})).assignment, vec({1, 0, 0}));
}

TEST(SolveRelaxation, ThreeItemExample) {
  const auto sol = solve_relaxation(kThreeItems, vec({10, 7, 4}));
  EXPECT_EQ(sol.assignment, vec({1, 0.5, 0}));
  EXPECT_DOUBLE_EQ(sol.objective_value, 13.5);
}

TEST(SolveRelaxation, ZeroObjective) {
  const auto sol = solve_relaxation(kThreeItems, vec({0, 0, 0}));
  EXPECT_EQ(sol.assignment, vec({0, 0, 0}));
  EXPECT_EQ(sol.objective_value, 0.0);
}

TEST(SolveRelaxation, AgreesWithSimplexOnThreeItemExample) {
  LpProblem lp(3);
  lp.objective = -vec({10, 7, 4});
  lp.add_row(vec({5, 4, 3}), Relation::less_equal, 7);
  const auto [sol, basis] = solve_lp(lp);
  EXPECT_NEAR(-sol.objective_value, 13.5, 1e-9);
}

TEST(KnapsackProperties, ExactMatchesEnumerationAndDominanceHolds) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const auto k = testing::random_knapsack(rng);
    const auto exact = solve_exact(k.data, k.values);
    const auto greedy = solve_greedy(k.data, k.values);
    const auto relax = solve_relaxation(k.data, k.values);
    const auto brute = testing::enumerate_knapsack(k.values, k.data.weights, k.data.capacity);
    ASSERT_EQ(exact.objective_value, brute.value) << "trial " << trial;
    EXPECT_LE(greedy.objective_value, exact.objective_value);
    EXPECT_LE(exact.objective_value, relax.objective_value + 1e-9);
    int fractional = 0;
    for (Eigen::Index i = 0; i < relax.assignment.size(); ++i) {
      const double x = relax.assignment[i];
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 1.0);
      if (x > 0.0 && x < 1.0) ++fractional;
    }
    EXPECT_LE(fractional, 1);
  }
}

TEST(KnapsackProperties, RelaxationMatchesSimplex) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const auto k = testing::random_knapsack(rng);
    LpProblem lp(k.data.item_count());
    lp.objective = -k.values;
    Eigen::VectorXd w(k.data.item_count());
    for (int i = 0; i < k.data.item_count(); ++i) w[i] = k.data.weights[i];
    lp.add_row(w, Relation::less_equal, k.data.capacity);
    const auto [sol, basis] = solve_lp(lp);
    EXPECT_NEAR(-sol.objective_value, solve_relaxation(k.data, k.values).objective_value, 1e-6);
  }
}

TEST(KnapsackProperties, Deterministic) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const auto k = testing::random_knapsack(rng);
    EXPECT_EQ(solve_exact(k.data, k.values).assignment, solve_exact(k.data, k.values).assignment);
    EXPECT_EQ(solve_greedy(k.data, k.values).assignment,
              solve_greedy(k.data, k.values).assignment);
    EXPECT_EQ(solve_relaxation(k.data, k.values).assignment,
              solve_relaxation(k.data, k.values).assignment);
  }
}

TEST(KnapsackData, UnitKnapsackHasUnitWeights) {
  const auto data = unit_knapsack(4, 2);
  EXPECT_EQ(data.weights, std::vector<int>(4, 1));
  EXPECT_THROW(unit_knapsack(4, 0), ModelError);
}

}  // namespace
}  // namespace dfl

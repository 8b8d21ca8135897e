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

#include "dfl/oracle.hpp"

#include "brute_force.hpp"

#include <gtest/gtest.h>

#include <random>

namespace dfl {
namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

OptInstance three_items() {
  return make_knapsack_instance("k3", KnapsackData{{5, 4, 3}, 7});
}

TEST(Regret, ZeroForPerfectPrediction) {
  Oracle oracle(three_items(), parse_oracle("exact", Family::knapsack));
  EXPECT_EQ(regret(oracle.instance(), vec({10, 7, 4}), vec({10, 7, 4}), oracle).regret, 0.0);
}

TEST(Regret, ThreeItemExample) {
  Oracle oracle(three_items(), parse_oracle("exact", Family::knapsack));
  const RegretValue r = regret(oracle.instance(), vec({10, 7, 4}), vec({10, 2, 4}), oracle);
  EXPECT_DOUBLE_EQ(r.regret, 1.0);
  EXPECT_EQ(r.eval_oracle, "knap-exact");
}

TEST(Regret, ThreeItemExampleRelaxed) {
  // Truth fills item 1 and half of item 2 (13.5); the prediction fills
  // item 1 and two thirds of item 3 (10 + 8/3 under the true values).
  Oracle oracle(three_items(), parse_oracle("relax", Family::knapsack));
  const RegretValue r = regret(oracle.instance(), vec({10, 7, 4}), vec({10, 2, 4}), oracle);
  EXPECT_NEAR(r.regret, 13.5 - (10.0 + 8.0 / 3.0), 1e-12);
}

TEST(Regret, LpOracleOnKnapsackMatchesFractionalRelaxation) {
  Oracle lp(three_items(), parse_oracle("lp-relax", Family::knapsack));
  Oracle frac(three_items(), parse_oracle("relax", Family::knapsack));
  EXPECT_NEAR(regret(lp.instance(), vec({10, 7, 4}), vec({10, 2, 4}), lp).regret,
              regret(frac.instance(), vec({10, 7, 4}), vec({10, 2, 4}), frac).regret, 1e-9);
}

TEST(Regret, RejectsLengthMismatch) {
  Oracle oracle(three_items(), parse_oracle("exact", Family::knapsack));
  EXPECT_THROW(regret(oracle.instance(), vec({10, 7}), vec({10, 2, 4}), oracle), DimensionError);
}

TEST(ParseOracle, DescriptorsAndFamilies) {
  EXPECT_EQ(parse_oracle("exact", Family::knapsack).descriptor(), "knap-exact");
  EXPECT_EQ(parse_oracle("relax", Family::milp_scheduling).descriptor(), "lp-relax");
  EXPECT_EQ(parse_oracle("mip-gap:0.1", Family::milp_scheduling).descriptor(), "mip-gap:0.1");
  EXPECT_EQ(parse_oracle("exact", Family::milp_scheduling).descriptor(), "mip");
  EXPECT_THROW(parse_oracle("greedy", Family::milp_scheduling), ModelError);
  EXPECT_THROW(parse_oracle("simulated-annealing", Family::knapsack), ModelError);
  EXPECT_THROW(parse_oracle("mip-gap:-1", Family::milp_scheduling), ModelError);
}

// Regret properties over random knapsacks and scheduling toys.
TEST(RegretProperties, NonnegativeAndScaleInvariant) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> count(1, 12);
  std::uniform_real_distribution<double> value(-20.0, 40.0);
  const int weight_set[] = {1, 3, 5, 7};
  for (int trial = 0; trial < 200; ++trial) {
    const int n = count(rng);
    KnapsackData data;
    for (int i = 0; i < n; ++i) data.weights.push_back(weight_set[rng() % 4]);
    data.capacity = 1 + static_cast<int>(rng() % 25);
    Eigen::VectorXd truth(n), pred(n);
    for (int i = 0; i < n; ++i) {
      truth[i] = value(rng);
      pred[i] = value(rng);
    }
    for (const char* kind : {"exact", "relax", "lp-relax"}) {
      Oracle oracle(make_knapsack_instance("t", data), parse_oracle(kind, Family::knapsack));
      EXPECT_GE(regret(oracle.instance(), truth, pred, oracle).regret, 0.0) << kind;
      EXPECT_EQ(regret(oracle.instance(), truth, truth, oracle).regret, 0.0) << kind;
      // Positive scaling leaves the argmin optimal.
      const CoeffVector c = canonicalize(Sense::maximize, truth, n);
      const double base = oracle.solve(c).objective_value;
      const double scaled = c.dot(oracle.solve(3.5 * c).profile);
      EXPECT_NEAR(scaled, base, 1e-6 * (1.0 + std::abs(base))) << kind;
    }
  }
}

TEST(RegretProperties, SchedulingRelaxedAndExactNonnegative) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const SchedulingInstance inst = testing::random_toy_schedule(rng, 12);
    Eigen::VectorXd truth(inst.horizon), pred(inst.horizon);
    for (int s = 0; s < inst.horizon; ++s) {
      truth[s] = std::uniform_real_distribution<double>(1, 20)(rng);
      pred[s] = std::uniform_real_distribution<double>(1, 20)(rng);
    }
    if (!testing::enumerate_schedules(inst, truth)) continue;
    const OptInstance instance = make_scheduling_instance("toy", inst, inst.horizon);
    Oracle mip(instance, parse_oracle("exact", Family::milp_scheduling));
    Oracle relax(instance, parse_oracle("relax", Family::milp_scheduling));
    const double exact_regret = regret(instance, truth, pred, mip).regret;
    EXPECT_GE(exact_regret, 0.0);
    EXPECT_GE(regret(instance, truth, pred, relax).regret, 0.0);
    // Exact regret against an independent enumeration of the predicted argmin.
    const auto best = testing::enumerate_schedules(inst, truth);
    EXPECT_NEAR(mip.solve(truth).objective_value, *best, 1e-6);
  }
}

TEST(Oracle, WarmstartModesAgreeOnObjective) {
  const auto inst = generate_instance(InstanceKind::easy10, 4);
  const OptInstance instance = make_scheduling_instance("e10", inst, 48);
  std::mt19937_64 rng(9);
  std::vector<Oracle> relax;
  std::vector<Oracle> mip;
  for (auto mode : {"none", "basis", "bound"}) {
    OracleSpec spec = parse_oracle("relax", Family::milp_scheduling);
    spec.warmstart = parse_warmstart(mode);
    relax.emplace_back(instance, spec);
  }
  for (auto mode : {"none", "incumbent", "bound"}) {
    OracleSpec spec = parse_oracle("exact", Family::milp_scheduling);
    spec.warmstart = parse_warmstart(mode);
    mip.emplace_back(instance, spec);
  }
  for (int day = 0; day < 5; ++day) {
    Eigen::VectorXd c(48);
    for (int s = 0; s < 48; ++s) c[s] = std::uniform_real_distribution<double>(10, 80)(rng);
    const SolutionVector reference = relax[0].solve(c);
    for (auto& o : relax) {
      EXPECT_NEAR(o.solve(c, &reference).objective_value, reference.objective_value,
                  1e-6 * reference.objective_value);
    }
    const SolutionVector exact = mip[0].solve(c);
    for (auto& o : mip) {
      const SolutionVector s = o.solve(c, &exact);
      EXPECT_NEAR(s.objective_value, exact.objective_value, 1e-6 * exact.objective_value);
      EXPECT_NEAR(c.dot(s.profile), s.objective_value, 1e-6 * exact.objective_value);
    }
  }
  EXPECT_EQ(relax[1].calls(), 5);
}

TEST(Oracle, DeterministicForIdenticalInput) {
  const auto inst = generate_instance(InstanceKind::easy10, 2);
  const OptInstance instance = make_scheduling_instance("e10", inst, 48);
  Eigen::VectorXd c = Eigen::VectorXd::LinSpaced(48, 30.0, 50.0);
  Oracle a(instance, parse_oracle("exact", Family::milp_scheduling));
  Oracle b(instance, parse_oracle("exact", Family::milp_scheduling));
  EXPECT_EQ(a.solve(c).assignment, b.solve(c).assignment);
}

}  // namespace
}  // namespace dfl

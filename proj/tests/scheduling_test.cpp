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
#include "dfl/scheduling.hpp"

#include "brute_force.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

namespace dfl {
namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

SchedulingInstance toy() {
  SchedulingInstance inst;
  inst.horizon = 3;
  inst.capacities = {1};
  inst.tasks = {Task{1, 0, 3, 1, 1.0}, Task{1, 0, 3, 1, 1.0}};
  return inst;
}

TEST(BuildMilp, ToyOptimumUsesCheapestSlots) {
  const auto model = build_model(toy(), 3);
  LpProblem lp = model.problem;
  lp.objective = model.objective_for(vec({5, 1, 3}));
  const auto sol = solve_mip(lp, model.integral_mask, {});
  EXPECT_NEAR(sol.objective_value, 4.0, 1e-9);
  const auto schedule = decode_schedule(model, sol.assignment);
  EXPECT_FALSE(check_schedule(model.instance, schedule));
  std::vector<int> starts{schedule[0].start, schedule[1].start};
  std::sort(starts.begin(), starts.end());
  EXPECT_EQ(starts, (std::vector<int>{1, 2}));
}

TEST(BuildMilp, ConstantPricesMakeEveryScheduleOptimal) {
  SchedulingInstance inst = generate_instance(InstanceKind::easy10, 3);
  const Eigen::VectorXd prices = Eigen::VectorXd::Constant(inst.horizon, 2.5);
  const auto [lp, mask] = build_milp(inst, prices);
  const auto [relaxed, basis] = solve_lp(lp);
  double energy = 0.0;
  for (const Task& t : inst.tasks) energy += t.power * t.duration;
  EXPECT_NEAR(relaxed.objective_value, energy * 2.5, 1e-6);
}

TEST(BuildMilp, TightWindowForcesPlacement) {
  SchedulingInstance inst;
  inst.horizon = 6;
  inst.capacities = {2};
  inst.tasks = {Task{3, 2, 5, 1, 2.0}};
  const auto [lp, mask] = build_milp(inst, vec({9, 1, 1, 1, 9, 9}));
  ASSERT_EQ(lp.variable_count(), 1);
  const auto sol = solve_mip(lp, mask, {});
  EXPECT_NEAR(sol.objective_value, 2.0 * (1 + 1 + 9), 1e-9);
}

TEST(BuildMilp, EmptyWindowNamesTheTask) {
  SchedulingInstance inst = toy();
  inst.tasks.push_back(Task{3, 1, 3, 1, 1.0});
  try {
    build_milp(inst, vec({1, 1, 1}));
    FAIL();
  } catch (const ModelError& e) {
    EXPECT_NE(std::string(e.what()).find("task 2"), std::string::npos);
  }
}

TEST(BuildMilp, RejectsWrongPriceLength) {
  EXPECT_THROW(build_milp(toy(), vec({1, 1})), DimensionError);
}

TEST(BuildModel, CoarsePricesExpandOverFinerSlots) {
  SchedulingInstance inst;
  inst.horizon = 6;
  inst.capacities = {1};
  inst.tasks = {Task{1, 0, 6, 1, 1.0}};
  const auto model = build_model(inst, 2);  // slots 0-2 -> price 0, 3-5 -> price 1
  EXPECT_EQ(model.slot_coefficient, (std::vector<int>{0, 0, 0, 1, 1, 1}));
  const Eigen::VectorXd c = model.objective_for(vec({4, 1}));
  EXPECT_EQ(c, vec({4, 4, 4, 1, 1, 1}));
}

TEST(GenerateInstance, DeterministicPerSeed) {
  EXPECT_EQ(generate_instance(InstanceKind::easy10, 7), generate_instance(InstanceKind::easy10, 7));
  EXPECT_NE(generate_instance(InstanceKind::easy10, 7), generate_instance(InstanceKind::easy10, 8));
}

TEST(GenerateInstance, EasyShapes) {
  const auto e20 = generate_instance(InstanceKind::easy20, 1);
  EXPECT_EQ(e20.tasks.size(), 20u);
  EXPECT_EQ(e20.machine_count(), 3);
  EXPECT_EQ(e20.horizon, 48);
  EXPECT_EQ(generate_instance(InstanceKind::easy10, 1).tasks.size(), 10u);
  EXPECT_EQ(generate_instance(InstanceKind::easy15, 1).tasks.size(), 15u);
  const auto hard = generate_instance(InstanceKind::hard_like, 1);
  EXPECT_EQ(hard.horizon, 72);
  EXPECT_EQ(hard.tasks.size(), 20u);
}

TEST(GenerateInstance, UnknownKind) { EXPECT_THROW(parse_instance_kind("medium"), ModelError); }

TEST(GenerateInstance, EveryGeneratedRelaxationIsFeasible) {
  std::mt19937_64 rng(2);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const InstanceKind kind = seed % 4 == 3 ? InstanceKind::hard_like
                                            : static_cast<InstanceKind>(seed % 3);
    const auto inst = generate_instance(kind, seed);
    Eigen::VectorXd prices(inst.horizon);
    for (int s = 0; s < inst.horizon; ++s) {
      prices[s] = std::uniform_real_distribution<double>(10, 80)(rng);
    }
    const auto [lp, mask] = build_milp(inst, prices);
    EXPECT_NO_THROW(solve_lp(lp)) << "seed " << seed;
  }
}

TEST(InstanceFile, RoundTrips) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = generate_instance(seed % 2 ? InstanceKind::easy15 : InstanceKind::hard_like,
                                        seed);
    std::stringstream buf;
    write_instance(buf, inst);
    EXPECT_EQ(read_instance(buf), inst);
  }
  SchedulingInstance frac = toy();
  frac.tasks[0].power = 0.1 + 0.2;
  std::stringstream buf;
  write_instance(buf, frac);
  EXPECT_EQ(read_instance(buf), frac);
}

TEST(InstanceFile, ReportsLineOfBadRow) {
  std::stringstream buf("horizon 3\nmachines 1\ncapacity 1\ntasks 1\n1 0 x 1 1\n");
  try {
    read_instance(buf);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 5"), std::string::npos);
  }
}

TEST(CheckSchedule, FlagsCapacityAndWindowViolations) {
  const auto inst = toy();
  EXPECT_TRUE(check_schedule(inst, {{0, 0}, {0, 0}}));   // same slot, capacity 1
  EXPECT_TRUE(check_schedule(inst, {{0, 0}, {0, 3}}));   // outside window
  EXPECT_TRUE(check_schedule(inst, {{0, 0}, {-1, -1}}));  // unplaced
  EXPECT_FALSE(check_schedule(inst, {{0, 0}, {0, 2}}));
  EXPECT_DOUBLE_EQ(schedule_cost(inst, {{0, 0}, {0, 2}}, vec({5, 1, 3})), 8.0);
}

TEST(ScheduleProperties, MipSchedulesValidateAndCostsAgree) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto inst = generate_instance(InstanceKind::easy10, seed);
    std::mt19937_64 rng(seed);
    Eigen::VectorXd prices(inst.horizon);
    for (int s = 0; s < inst.horizon; ++s) {
      prices[s] = std::uniform_real_distribution<double>(10, 80)(rng);
    }
    const auto model = build_model(inst, inst.horizon);
    LpProblem lp = model.problem;
    lp.objective = model.objective_for(prices);
    const auto sol = solve_mip(lp, model.integral_mask, {});
    const auto schedule = decode_schedule(model, sol.assignment);
    EXPECT_FALSE(check_schedule(inst, schedule)) << *check_schedule(inst, schedule);
    EXPECT_NEAR(schedule_cost(inst, schedule, prices), sol.objective_value,
                1e-6 * std::abs(sol.objective_value));
    EXPECT_NEAR(prices.dot(model.profile_of(sol.assignment)), sol.objective_value,
                1e-6 * std::abs(sol.objective_value));
  }
}

}  // namespace
}  // namespace dfl

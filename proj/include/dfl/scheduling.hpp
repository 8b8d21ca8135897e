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

// Energy-cost-aware scheduling: tasks with duration, release slot, deadline,
// resource requirement and power draw are placed non-preemptively on machines
// with a per-slot resource capacity. The cost of a schedule is the energy it
// draws weighted by the per-slot price.

#ifndef DFL_SCHEDULING_HPP_
#define DFL_SCHEDULING_HPP_

#include "dfl/core.hpp"
#include "dfl/lp.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dfl {

struct Task {
  int duration = 1;
  int earliest_start = 0;
  int latest_end = 1;  // exclusive: the task must finish by this slot
  int requirement = 1;
  double power = 1.0;

  friend bool operator==(const Task&, const Task&) = default;
};

struct SchedulingInstance {
  int horizon = 48;
  std::vector<int> capacities;  // one entry per machine
  std::vector<Task> tasks;
  std::string generator;        // free-form provenance, kept by the file format

  int machine_count() const { return static_cast<int>(capacities.size()); }
  void validate() const;

  friend bool operator==(const SchedulingInstance&, const SchedulingInstance&) = default;
};

/// Start variable x[task, machine, start].
struct StartVariable {
  int task;
  int machine;
  int start;
};

/// Time-indexed MILP for one instance. The constraint part is built once; only
/// the objective depends on the prices.
///
/// Prices are given per coefficient slot. When the horizon is finer than the
/// coefficient count (e.g. 72 slots against 48 half-hour prices), scheduling
/// slot s is charged the price of coefficient floor(s * count / horizon).
struct SchedulingModel {
  SchedulingInstance instance;
  int coefficient_count = 0;
  std::vector<int> slot_coefficient;
  std::vector<StartVariable> variables;
  LpProblem problem;                   // objective left at zero
  std::vector<bool> integral_mask;
  Eigen::MatrixXd energy_map;          // coefficient_count x variable_count

  Eigen::VectorXd objective_for(const CoeffVector& prices) const;
  Eigen::VectorXd profile_of(const Eigen::VectorXd& assignment) const;
};

SchedulingModel build_model(const SchedulingInstance& instance, int coefficient_count);

/// The MILP with objective coefficient power * sum of prices over the slots a
/// start covers. `prices` has one entry per horizon slot.
std::pair<LpProblem, std::vector<bool>> build_milp(const SchedulingInstance& instance,
                                                   const CoeffVector& prices);

enum class InstanceKind { easy10, easy15, easy20, hard_like };

InstanceKind parse_instance_kind(const std::string& name);
std::string to_string(InstanceKind kind);

SchedulingInstance generate_instance(InstanceKind kind, std::uint64_t seed);

/// One placement per task: machine and start slot.
struct Placement {
  int machine = -1;
  int start = -1;
};

/// Reads placements out of a (0/1) assignment. Tasks whose variables do not
/// sum to one get machine = -1.
std::vector<Placement> decode_schedule(const SchedulingModel& model,
                                       const Eigen::VectorXd& assignment);

/// Empty when the schedule is feasible, otherwise a description of the first
/// violation found.
std::optional<std::string> check_schedule(const SchedulingInstance& instance,
                                          const std::vector<Placement>& schedule);

/// Cost of a schedule under per-slot prices (length = horizon).
double schedule_cost(const SchedulingInstance& instance, const std::vector<Placement>& schedule,
                     const CoeffVector& prices);

void write_instance(std::ostream& out, const SchedulingInstance& instance);
SchedulingInstance read_instance(std::istream& in);
void save_instance(const std::string& path, const SchedulingInstance& instance);
SchedulingInstance load_instance(const std::string& path);

}  // namespace dfl

#endif  // DFL_SCHEDULING_HPP_

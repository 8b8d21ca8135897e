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

#include "dfl/scheduling.hpp"

#include "dfl/text.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace dfl {

void SchedulingInstance::validate() const {
  if (horizon <= 0) throw ModelError("scheduling: horizon must be positive");
  if (capacities.empty()) throw ModelError("scheduling: no machines");
  for (int c : capacities) {
    if (c <= 0) throw ModelError("scheduling: machine capacity must be positive");
  }
  for (std::size_t j = 0; j < tasks.size(); ++j) {
    const Task& t = tasks[j];
    const std::string name = "scheduling: task " + std::to_string(j);
    if (t.duration <= 0) throw ModelError(name + " has nonpositive duration");
    if (t.requirement <= 0) throw ModelError(name + " has nonpositive requirement");
    if (!std::isfinite(t.power) || t.power < 0.0) throw ModelError(name + " has invalid power");
    if (t.earliest_start < 0 || t.latest_end > horizon) {
      throw ModelError(name + " window leaves the horizon");
    }
    if (t.earliest_start + t.duration > t.latest_end) {
      throw ModelError(name + " has an empty admissible window");
    }
  }
}

Eigen::VectorXd SchedulingModel::objective_for(const CoeffVector& prices) const {
  if (prices.size() != coefficient_count) {
    throw DimensionError("scheduling: expected " + std::to_string(coefficient_count) +
                         " prices, got " + std::to_string(prices.size()));
  }
  return energy_map.transpose() * prices;
}

Eigen::VectorXd SchedulingModel::profile_of(const Eigen::VectorXd& assignment) const {
  return energy_map * assignment;
}

SchedulingModel build_model(const SchedulingInstance& instance, int coefficient_count) {
  instance.validate();
  if (coefficient_count <= 0) throw ModelError("scheduling: coefficient count must be positive");
  SchedulingModel model;
  model.instance = instance;
  model.coefficient_count = coefficient_count;
  const int horizon = instance.horizon;
  model.slot_coefficient.resize(static_cast<std::size_t>(horizon));
  for (int s = 0; s < horizon; ++s) {
    model.slot_coefficient[s] =
        static_cast<int>(static_cast<long>(s) * coefficient_count / horizon);
  }

  const int machines = instance.machine_count();
  for (std::size_t j = 0; j < instance.tasks.size(); ++j) {
    const Task& t = instance.tasks[j];
    bool placed = false;
    for (int m = 0; m < machines; ++m) {
      if (t.requirement > instance.capacities[m]) continue;
      for (int s = t.earliest_start; s + t.duration <= t.latest_end; ++s) {
        model.variables.push_back({static_cast<int>(j), m, s});
        placed = true;
      }
    }
    if (!placed) {
      throw ModelError("scheduling: task " + std::to_string(j) + " has no admissible placement");
    }
  }

  const Eigen::Index n = static_cast<Eigen::Index>(model.variables.size());
  model.problem = LpProblem(n);
  model.integral_mask.assign(static_cast<std::size_t>(n), true);
  model.energy_map = Eigen::MatrixXd::Zero(coefficient_count, n);

  // (a) every task starts exactly once.
  const std::size_t task_count = instance.tasks.size();
  Eigen::MatrixXd assign = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(task_count), n);
  // (b) per machine and slot, active requirement within capacity.
  Eigen::MatrixXd usage = Eigen::MatrixXd::Zero(machines * horizon, n);
  for (Eigen::Index v = 0; v < n; ++v) {
    const StartVariable& sv = model.variables[v];
    const Task& t = instance.tasks[sv.task];
    assign(sv.task, v) = 1.0;
    for (int s = sv.start; s < sv.start + t.duration; ++s) {
      usage(sv.machine * horizon + s, v) = t.requirement;
      model.energy_map(model.slot_coefficient[s], v) += t.power;
    }
  }
  for (std::size_t j = 0; j < task_count; ++j) {
    model.problem.add_row(assign.row(static_cast<Eigen::Index>(j)).transpose(), Relation::equal,
                          1.0);
  }
  for (int m = 0; m < machines; ++m) {
    for (int s = 0; s < horizon; ++s) {
      const Eigen::Index r = m * horizon + s;
      // Rows no start can violate are dropped.
      if (usage.row(r).sum() <= instance.capacities[m]) continue;
      model.problem.add_row(usage.row(r).transpose(), Relation::less_equal,
                            instance.capacities[m]);
    }
  }
  return model;
}

std::pair<LpProblem, std::vector<bool>> build_milp(const SchedulingInstance& instance,
                                                   const CoeffVector& prices) {
  if (prices.size() != instance.horizon) {
    throw DimensionError("build_milp: expected " + std::to_string(instance.horizon) +
                         " prices, got " + std::to_string(prices.size()));
  }
  check_finite(prices, "build_milp prices");
  SchedulingModel model = build_model(instance, instance.horizon);
  model.problem.objective = model.objective_for(prices);
  return {std::move(model.problem), std::move(model.integral_mask)};
}

InstanceKind parse_instance_kind(const std::string& name) {
  if (name == "easy-10") return InstanceKind::easy10;
  if (name == "easy-15") return InstanceKind::easy15;
  if (name == "easy-20") return InstanceKind::easy20;
  if (name == "hard-like") return InstanceKind::hard_like;
  throw ModelError("unknown instance kind '" + name + "'");
}

std::string to_string(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::easy10:
      return "easy-10";
    case InstanceKind::easy15:
      return "easy-15";
    case InstanceKind::easy20:
      return "easy-20";
    case InstanceKind::hard_like:
      return "hard-like";
  }
  return "unknown";
}

namespace {

struct GeneratorRanges {
  int machines;
  int capacity;
  int tasks;
  int horizon;
  int min_duration, max_duration;
  int min_slack, max_slack;
  int min_requirement, max_requirement;
  int min_power, max_power;
};

GeneratorRanges ranges_for(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::easy10:
      return {3, 6, 10, 48, 1, 6, 2, 24, 1, 4, 1, 10};
    case InstanceKind::easy15:
      return {3, 6, 15, 48, 1, 6, 2, 24, 1, 4, 1, 10};
    case InstanceKind::easy20:
      return {3, 6, 20, 48, 1, 6, 2, 24, 1, 4, 1, 10};
    case InstanceKind::hard_like:
      return {3, 6, 20, 72, 4, 16, 8, 40, 1, 4, 1, 10};
  }
  throw ModelError("unknown instance kind");
}

}  // namespace

SchedulingInstance generate_instance(InstanceKind kind, std::uint64_t seed) {
  const GeneratorRanges r = ranges_for(kind);
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };

  SchedulingInstance inst;
  inst.horizon = r.horizon;
  inst.capacities.assign(static_cast<std::size_t>(r.machines), r.capacity);
  for (int j = 0; j < r.tasks; ++j) {
    Task t;
    t.duration = uniform(r.min_duration, r.max_duration);
    t.earliest_start = uniform(0, r.horizon - t.duration);
    const int slack = uniform(r.min_slack, r.max_slack);
    t.latest_end = std::min(r.horizon, t.earliest_start + t.duration + slack);
    t.requirement = uniform(r.min_requirement, r.max_requirement);
    t.power = uniform(r.min_power, r.max_power);
    inst.tasks.push_back(t);
  }
  std::ostringstream gen;
  gen << to_string(kind) << " seed=" << seed << " duration=[" << r.min_duration << ','
      << r.max_duration << "] slack=[" << r.min_slack << ',' << r.max_slack << "] requirement=["
      << r.min_requirement << ',' << r.max_requirement << "] power=[" << r.min_power << ','
      << r.max_power << "] capacity=" << r.capacity;
  inst.generator = gen.str();
  inst.validate();
  return inst;
}

std::vector<Placement> decode_schedule(const SchedulingModel& model,
                                       const Eigen::VectorXd& assignment) {
  if (assignment.size() != static_cast<Eigen::Index>(model.variables.size())) {
    throw DimensionError("decode_schedule: assignment size mismatch");
  }
  std::vector<Placement> out(model.instance.tasks.size());
  std::vector<int> count(model.instance.tasks.size(), 0);
  for (std::size_t v = 0; v < model.variables.size(); ++v) {
    if (assignment[static_cast<Eigen::Index>(v)] > 0.5) {
      const StartVariable& sv = model.variables[v];
      out[sv.task] = {sv.machine, sv.start};
      ++count[sv.task];
    }
  }
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (count[j] != 1) out[j] = {};
  }
  return out;
}

std::optional<std::string> check_schedule(const SchedulingInstance& instance,
                                          const std::vector<Placement>& schedule) {
  if (schedule.size() != instance.tasks.size()) return "schedule size mismatch";
  std::vector<int> load(static_cast<std::size_t>(instance.machine_count() * instance.horizon), 0);
  for (std::size_t j = 0; j < schedule.size(); ++j) {
    const Task& t = instance.tasks[j];
    const Placement& p = schedule[j];
    if (p.machine < 0 || p.machine >= instance.machine_count()) {
      return "task " + std::to_string(j) + " is not placed exactly once";
    }
    if (p.start < t.earliest_start || p.start + t.duration > t.latest_end) {
      return "task " + std::to_string(j) + " runs outside its window";
    }
    for (int s = p.start; s < p.start + t.duration; ++s) {
      load[static_cast<std::size_t>(p.machine * instance.horizon + s)] += t.requirement;
    }
  }
  for (int m = 0; m < instance.machine_count(); ++m) {
    for (int s = 0; s < instance.horizon; ++s) {
      if (load[static_cast<std::size_t>(m * instance.horizon + s)] > instance.capacities[m]) {
        return "machine " + std::to_string(m) + " over capacity at slot " + std::to_string(s);
      }
    }
  }
  return std::nullopt;
}

double schedule_cost(const SchedulingInstance& instance, const std::vector<Placement>& schedule,
                     const CoeffVector& prices) {
  if (prices.size() != instance.horizon) throw DimensionError("schedule_cost: price size");
  double cost = 0.0;
  for (std::size_t j = 0; j < schedule.size(); ++j) {
    const Task& t = instance.tasks[j];
    for (int s = schedule[j].start; s < schedule[j].start + t.duration; ++s) {
      cost += t.power * prices[s];
    }
  }
  return cost;
}

void write_instance(std::ostream& out, const SchedulingInstance& instance) {
  instance.validate();
  out << "# energy-cost-aware scheduling instance\n";
  if (!instance.generator.empty()) out << "generator " << instance.generator << '\n';
  out << "horizon " << instance.horizon << '\n';
  out << "machines " << instance.machine_count() << '\n';
  out << "capacity";
  for (int c : instance.capacities) out << ' ' << c;
  out << '\n';
  out << "tasks " << instance.tasks.size() << '\n';
  out << "# duration earliest_start latest_end requirement power\n";
  for (const Task& t : instance.tasks) {
    out << t.duration << ' ' << t.earliest_start << ' ' << t.latest_end << ' ' << t.requirement
        << ' ' << format_double(t.power) << '\n';
  }
}

SchedulingInstance read_instance(std::istream& in) {
  SchedulingInstance inst;
  std::string line;
  int line_no = 0;
  long machines = -1;
  long task_count = -1;
  bool have_horizon = false;
  auto where = [&line_no] { return "instance line " + std::to_string(line_no); };
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto fields = split_whitespace(body);
    const std::string& key = fields.front();
    if (key == "generator") {
      inst.generator = std::string(trim(body.substr(key.size())));
    } else if (key == "horizon" && fields.size() == 2) {
      inst.horizon = static_cast<int>(parse_long(fields[1], where()));
      have_horizon = true;
    } else if (key == "machines" && fields.size() == 2) {
      machines = parse_long(fields[1], where());
    } else if (key == "capacity") {
      for (std::size_t i = 1; i < fields.size(); ++i) {
        inst.capacities.push_back(static_cast<int>(parse_long(fields[i], where())));
      }
    } else if (key == "tasks" && fields.size() == 2) {
      task_count = parse_long(fields[1], where());
    } else if (task_count >= 0 && fields.size() == 5) {
      Task t;
      t.duration = static_cast<int>(parse_long(fields[0], where()));
      t.earliest_start = static_cast<int>(parse_long(fields[1], where()));
      t.latest_end = static_cast<int>(parse_long(fields[2], where()));
      t.requirement = static_cast<int>(parse_long(fields[3], where()));
      t.power = parse_double(fields[4], where());
      inst.tasks.push_back(t);
    } else {
      throw ParseError(where() + ": unrecognized line '" + std::string(body) + "'");
    }
  }
  if (!have_horizon || machines < 0 || task_count < 0) {
    throw ParseError("instance: missing horizon, machines or tasks header");
  }
  if (inst.capacities.size() == 1 && machines > 1) {
    inst.capacities.assign(static_cast<std::size_t>(machines), inst.capacities.front());
  }
  if (static_cast<long>(inst.capacities.size()) != machines) {
    throw ParseError("instance: capacity count does not match machine count");
  }
  if (static_cast<long>(inst.tasks.size()) != task_count) {
    throw ParseError("instance: expected " + std::to_string(task_count) + " tasks, found " +
                     std::to_string(inst.tasks.size()));
  }
  inst.validate();
  return inst;
}

void save_instance(const std::string& path, const SchedulingInstance& instance) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_instance(out, instance);
}

SchedulingInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  return read_instance(in);
}

}  // namespace dfl

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

#include "dfl/text.hpp"

#include <chrono>

namespace dfl {

OptInstance::OptInstance(std::string id, Sense sense, Family family, Payload payload)
    : id_(std::move(id)), sense_(sense), family_(family), payload_(std::move(payload)) {
  const bool ok = (family == Family::knapsack && std::holds_alternative<KnapsackData>(payload_)) ||
                  (family == Family::milp_scheduling &&
                   std::holds_alternative<std::shared_ptr<const SchedulingModel>>(payload_)) ||
                  (family == Family::lp &&
                   std::holds_alternative<std::shared_ptr<const LpStructure>>(payload_));
  if (!ok) throw ModelError("OptInstance: payload does not match family " + to_string(family));
}

Eigen::Index OptInstance::coefficient_count() const {
  switch (family_) {
    case Family::knapsack:
      return knapsack().item_count();
    case Family::milp_scheduling:
      return scheduling().coefficient_count;
    case Family::lp:
      return lp().problem.variable_count();
  }
  return 0;
}

const KnapsackData& OptInstance::knapsack() const { return std::get<KnapsackData>(payload_); }

const SchedulingModel& OptInstance::scheduling() const {
  return *std::get<std::shared_ptr<const SchedulingModel>>(payload_);
}

const LpStructure& OptInstance::lp() const {
  return *std::get<std::shared_ptr<const LpStructure>>(payload_);
}

LpStructure OptInstance::lp_view() const {
  switch (family_) {
    case Family::knapsack: {
      const KnapsackData& data = knapsack();
      LpStructure out{LpProblem(data.item_count()), {}};
      Eigen::VectorXd w(data.item_count());
      for (int i = 0; i < data.item_count(); ++i) w[i] = data.weights[i];
      out.problem.add_row(w, Relation::less_equal, data.capacity);
      out.integral_mask.assign(static_cast<std::size_t>(data.item_count()), true);
      return out;
    }
    case Family::milp_scheduling:
      return {scheduling().problem, scheduling().integral_mask};
    case Family::lp: {
      LpStructure out = lp();
      out.problem.objective.setZero();
      return out;
    }
  }
  throw ModelError("lp_view: unknown family");
}

OptInstance make_knapsack_instance(std::string id, KnapsackData data) {
  data.validate();
  return OptInstance(std::move(id), Sense::maximize, Family::knapsack, std::move(data));
}

OptInstance make_scheduling_instance(std::string id, const SchedulingInstance& instance,
                                     int coefficient_count) {
  auto model = std::make_shared<const SchedulingModel>(build_model(instance, coefficient_count));
  return OptInstance(std::move(id), Sense::minimize, Family::milp_scheduling, std::move(model));
}

OptInstance make_lp_instance(std::string id, Sense sense, LpProblem problem,
                             std::vector<bool> integral_mask) {
  problem.validate();
  if (integral_mask.empty()) {
    integral_mask.assign(static_cast<std::size_t>(problem.variable_count()), false);
  }
  auto structure =
      std::make_shared<const LpStructure>(LpStructure{std::move(problem), std::move(integral_mask)});
  return OptInstance(std::move(id), sense, Family::lp, std::move(structure));
}

std::string OracleSpec::descriptor() const {
  switch (kind) {
    case OracleKind::knap_exact:
      return "knap-exact";
    case OracleKind::knap_greedy:
      return "knap-greedy";
    case OracleKind::knap_relax:
      return "knap-relax";
    case OracleKind::lp_relax:
      return "lp-relax";
    case OracleKind::mip:
      return gap_tolerance > 0.0 ? "mip-gap:" + format_double(gap_tolerance) : "mip";
  }
  return "unknown";
}

bool OracleSpec::is_exact() const {
  return kind == OracleKind::knap_exact || (kind == OracleKind::mip && gap_tolerance == 0.0);
}

bool OracleSpec::is_relaxation() const {
  return kind == OracleKind::knap_relax || kind == OracleKind::lp_relax;
}

bool oracle_valid_for(const OracleSpec& spec, Family family) {
  switch (spec.kind) {
    case OracleKind::knap_exact:
    case OracleKind::knap_greedy:
    case OracleKind::knap_relax:
      return family == Family::knapsack;
    case OracleKind::lp_relax:
    case OracleKind::mip:
      return true;
  }
  return false;
}

OracleSpec parse_oracle(const std::string& descriptor, Family family) {
  OracleSpec spec;
  if (descriptor == "exact") {
    spec.kind = family == Family::knapsack ? OracleKind::knap_exact : OracleKind::mip;
  } else if (descriptor == "relax") {
    spec.kind = family == Family::knapsack ? OracleKind::knap_relax : OracleKind::lp_relax;
  } else if (descriptor == "greedy" || descriptor == "knap-greedy") {
    spec.kind = OracleKind::knap_greedy;
  } else if (descriptor == "knap-exact") {
    spec.kind = OracleKind::knap_exact;
  } else if (descriptor == "knap-relax") {
    spec.kind = OracleKind::knap_relax;
  } else if (descriptor == "lp-relax") {
    spec.kind = OracleKind::lp_relax;
  } else if (descriptor == "mip") {
    spec.kind = OracleKind::mip;
  } else if (descriptor.rfind("mip-gap:", 0) == 0 || descriptor.rfind("gap:", 0) == 0) {
    spec.kind = OracleKind::mip;
    spec.gap_tolerance = parse_double(descriptor.substr(descriptor.find(':') + 1), "oracle gap");
    if (!(spec.gap_tolerance >= 0.0)) throw ModelError("oracle gap tolerance must be >= 0");
  } else {
    throw ModelError("unknown oracle '" + descriptor + "'");
  }
  if (!oracle_valid_for(spec, family)) {
    throw ModelError("oracle '" + descriptor + "' is not valid for family " + to_string(family));
  }
  return spec;
}

SolveWarmstart parse_warmstart(const std::string& name) {
  if (name == "none") return SolveWarmstart::none;
  if (name == "basis") return SolveWarmstart::basis;
  if (name == "incumbent") return SolveWarmstart::incumbent;
  if (name == "bound") return SolveWarmstart::bound;
  throw ModelError("unknown solve warmstart '" + name + "'");
}

std::string to_string(SolveWarmstart warmstart) {
  switch (warmstart) {
    case SolveWarmstart::none:
      return "none";
    case SolveWarmstart::basis:
      return "basis";
    case SolveWarmstart::incumbent:
      return "incumbent";
    case SolveWarmstart::bound:
      return "bound";
  }
  return "none";
}

Oracle::Oracle(OptInstance instance, OracleSpec spec)
    : instance_(std::move(instance)), spec_(spec) {
  if (!oracle_valid_for(spec_, instance_.family())) {
    throw ModelError("oracle " + spec_.descriptor() + " is not valid for family " +
                     to_string(instance_.family()));
  }
  if (spec_.kind == OracleKind::lp_relax || spec_.kind == OracleKind::mip) {
    structure_ = instance_.lp_view();
  }
}

Oracle::~Oracle() = default;
Oracle::Oracle(Oracle&&) noexcept = default;
Oracle& Oracle::operator=(Oracle&&) noexcept = default;

SolutionVector Oracle::solve(const CoeffVector& cost, const SolutionVector* hint) {
  if (cost.size() != instance_.coefficient_count()) {
    throw DimensionError("oracle: expected " + std::to_string(instance_.coefficient_count()) +
                         " coefficients, got " + std::to_string(cost.size()));
  }
  check_finite(cost, "oracle cost");
  const auto start = std::chrono::steady_clock::now();
  SolutionVector sol;
  switch (spec_.kind) {
    case OracleKind::knap_exact:
      sol = solve_exact(instance_.knapsack(), -cost);
      break;
    case OracleKind::knap_greedy:
      sol = solve_greedy(instance_.knapsack(), -cost);
      break;
    case OracleKind::knap_relax:
      sol = solve_relaxation(instance_.knapsack(), -cost);
      break;
    case OracleKind::lp_relax:
    case OracleKind::mip:
      sol = solve_lp_family(cost, hint);
      break;
  }
  sol.solve_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  sol.objective_value = cost.dot(sol.profile);
  sol.solved_with = spec_.descriptor();
  ++calls_;
  seconds_ += sol.solve_seconds;
  if (spec_.warmstart == SolveWarmstart::incumbent && spec_.kind == OracleKind::mip) {
    pool_->insert(sol);
  }
  return sol;
}

SolutionVector Oracle::solve_lp_family(const CoeffVector& cost, const SolutionVector* hint) {
  const bool scheduling = instance_.family() == Family::milp_scheduling;
  Eigen::VectorXd objective = scheduling ? instance_.scheduling().objective_for(cost) : cost;
  SolutionVector sol;

  if (spec_.kind == OracleKind::lp_relax) {
    Simplex::Result result;
    if (spec_.warmstart == SolveWarmstart::basis) {
      if (!warm_simplex_) warm_simplex_ = std::make_unique<Simplex>(structure_->problem);
      result = warm_simplex_->solve(objective);
    } else if (spec_.warmstart == SolveWarmstart::bound && hint) {
      // Objective cut: nothing worse than the known solution.
      LpProblem cut = structure_->problem;
      cut.objective = objective;
      const double known = cost.dot(hint->profile);
      cut.add_row(objective, Relation::less_equal, known + 1e-9 * (1.0 + std::abs(known)));
      Simplex simplex(std::move(cut));
      result = simplex.solve();
    } else {
      LpProblem problem = structure_->problem;
      problem.objective = objective;
      Simplex simplex(std::move(problem));
      result = simplex.solve();
    }
    lp_iterations_ += result.iterations;
    if (result.status == LpStatus::infeasible) {
      throw SolverError(SolverError::Kind::infeasible, "oracle " + instance_.id() + ": infeasible");
    }
    if (result.status == LpStatus::unbounded) {
      throw SolverError(SolverError::Kind::unbounded, "oracle " + instance_.id() + ": unbounded");
    }
    sol.assignment = std::move(result.x);
  } else {
    MipConfig config;
    config.gap_tolerance = spec_.gap_tolerance;
    config.node_limit = spec_.node_limit;
    if (spec_.warmstart == SolveWarmstart::incumbent) {
      std::optional<SolutionVector> seed = pool_->best(cost);
      if (hint && (!seed || cost.dot(hint->profile) < seed->objective_value)) seed = *hint;
      config.incumbent = std::move(seed);
    } else if (spec_.warmstart == SolveWarmstart::bound && hint) {
      config.objective_bound = cost.dot(hint->profile);
    }
    LpProblem problem = structure_->problem;
    problem.objective = objective;
    MipStats stats;
    sol = solve_mip(problem, structure_->integral_mask, config, &stats);
    lp_iterations_ += stats.lp_iterations;
  }
  sol.profile = scheduling ? instance_.scheduling().profile_of(sol.assignment) : sol.assignment;
  return sol;
}

const SolutionVector& TrueSolutionCache::get(long id, const CoeffVector& canonical_true,
                                             Oracle& oracle) {
  const std::string descriptor = oracle.spec().descriptor();
  if (descriptor_.empty()) {
    descriptor_ = descriptor;
  } else if (descriptor_ != descriptor) {
    throw ModelError("solution cache holds " + descriptor_ + " solutions, asked for " + descriptor);
  }
  auto it = entries_.find(id);
  if (it == entries_.end()) it = entries_.emplace(id, oracle.solve(canonical_true)).first;
  return it->second;
}

RegretValue regret_given_truth(const CoeffVector& canonical_true, const SolutionVector& truth,
                               const CoeffVector& canonical_pred, Oracle& oracle) {
  const SolutionVector predicted = oracle.solve(canonical_pred);
  double value = canonical_true.dot(predicted.profile) - canonical_true.dot(truth.profile);
  if (value < 0.0 && value > -1e-6 * (1.0 + std::abs(truth.objective_value))) value = 0.0;
  return {value, oracle.spec().descriptor()};
}

RegretValue regret(const OptInstance& instance, const CoeffVector& true_coeffs,
                   const CoeffVector& pred_coeffs, Oracle& oracle) {
  const Eigen::Index n = instance.coefficient_count();
  const CoeffVector c = canonicalize(instance.sense(), true_coeffs, n);
  const CoeffVector c_hat = canonicalize(instance.sense(), pred_coeffs, n);
  check_finite(c, "regret true coefficients");
  check_finite(c_hat, "regret predicted coefficients");
  const SolutionVector truth = oracle.solve(c);
  return regret_given_truth(c, truth, c_hat, oracle);
}

}  // namespace dfl

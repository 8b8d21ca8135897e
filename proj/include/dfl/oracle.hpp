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

// Optimization instances with a variable objective slot, and the oracles
// v*(theta) that solve them.
//
// All oracle calls take canonical (minimization-sense) coefficients. The
// regret contract and the SPO subgradient are computed in that space; the
// trainer maps gradients back through the instance's sense.

#ifndef DFL_ORACLE_HPP_
#define DFL_ORACLE_HPP_

#include "dfl/core.hpp"
#include "dfl/knapsack.hpp"
#include "dfl/lp.hpp"
#include "dfl/mip.hpp"
#include "dfl/scheduling.hpp"

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>

namespace dfl {

/// A generic linear program (or MILP, via the mask) whose objective is the
/// coefficient vector itself.
struct LpStructure {
  LpProblem problem;
  std::vector<bool> integral_mask;
};

/// Fixed constraint data of one recurring optimization problem. Copies share
/// the immutable payload.
class OptInstance {
 public:
  using Payload = std::variant<KnapsackData, std::shared_ptr<const SchedulingModel>,
                               std::shared_ptr<const LpStructure>>;

  OptInstance(std::string id, Sense sense, Family family, Payload payload);

  const std::string& id() const { return id_; }
  Sense sense() const { return sense_; }
  Family family() const { return family_; }
  /// Length of the coefficient vectors this instance accepts.
  Eigen::Index coefficient_count() const;

  const KnapsackData& knapsack() const;
  const SchedulingModel& scheduling() const;
  const LpStructure& lp() const;

  /// Relaxation/MILP view of the instance with a zero objective: the knapsack
  /// capacity row, the scheduling model, or the stored LP.
  LpStructure lp_view() const;

 private:
  std::string id_;
  Sense sense_;
  Family family_;
  Payload payload_;
};

OptInstance make_knapsack_instance(std::string id, KnapsackData data);
OptInstance make_scheduling_instance(std::string id, const SchedulingInstance& instance,
                                     int coefficient_count);
OptInstance make_lp_instance(std::string id, Sense sense, LpProblem problem,
                             std::vector<bool> integral_mask = {});

enum class OracleKind { knap_exact, knap_greedy, knap_relax, lp_relax, mip };

/// How an oracle uses a known feasible solution (typically the cached true
/// solution v*(theta)) when solving v*(2 theta_hat - theta).
enum class SolveWarmstart { none, basis, incumbent, bound };

struct OracleSpec {
  OracleKind kind = OracleKind::knap_exact;
  double gap_tolerance = 0.0;
  SolveWarmstart warmstart = SolveWarmstart::none;
  std::optional<long> node_limit;

  /// "knap-exact", "knap-greedy", "knap-relax", "lp-relax", "mip" or
  /// "mip-gap:<tol>".
  std::string descriptor() const;
  bool is_exact() const;
  bool is_relaxation() const;
};

/// Parses a descriptor. The family-neutral aliases "exact" and "relax"
/// resolve to the family's exact oracle and its continuous relaxation.
OracleSpec parse_oracle(const std::string& descriptor, Family family);
SolveWarmstart parse_warmstart(const std::string& name);
std::string to_string(SolveWarmstart warmstart);
bool oracle_valid_for(const OracleSpec& spec, Family family);

/// Stateful oracle bound to one instance. Holds the simplex tableau for basis
/// reuse and the solution pool for incumbent injection; one solve at a time.
class Oracle {
 public:
  Oracle(OptInstance instance, OracleSpec spec);
  ~Oracle();
  Oracle(Oracle&&) noexcept;
  Oracle& operator=(Oracle&&) noexcept;

  /// argmin over the feasible set of cost . profile. `hint` is a known
  /// feasible solution used according to the warmstart setting.
  SolutionVector solve(const CoeffVector& cost, const SolutionVector* hint = nullptr);

  const OptInstance& instance() const { return instance_; }
  const OracleSpec& spec() const { return spec_; }
  long calls() const { return calls_; }
  double seconds() const { return seconds_; }
  long lp_iterations() const { return lp_iterations_; }

 private:
  SolutionVector solve_lp_family(const CoeffVector& cost, const SolutionVector* hint);

  OptInstance instance_;
  OracleSpec spec_;
  std::optional<LpStructure> structure_;
  std::unique_ptr<Simplex> warm_simplex_;
  std::unique_ptr<SolutionPool> pool_ = std::make_unique<SolutionPool>();
  long calls_ = 0;
  double seconds_ = 0.0;
  long lp_iterations_ = 0;
};

/// f(v*(pred), true) - f(v*(true), true), with both solves made by `oracle`.
/// Coefficients are in the instance's own sense.
/// Lazily filled map from instance id to v*(theta). Every entry is produced
/// by oracles with the same descriptor; mixing descriptors is an error.
class TrueSolutionCache {
 public:
  const SolutionVector& get(long id, const CoeffVector& canonical_true, Oracle& oracle);
  bool contains(long id) const { return entries_.count(id) > 0; }
  std::size_t size() const { return entries_.size(); }
  const std::string& descriptor() const { return descriptor_; }

 private:
  std::unordered_map<long, SolutionVector> entries_;
  std::string descriptor_;
};

RegretValue regret(const OptInstance& instance, const CoeffVector& true_coeffs,
                   const CoeffVector& pred_coeffs, Oracle& oracle);

/// Same, reusing an already solved true solution (canonical objective).
RegretValue regret_given_truth(const CoeffVector& canonical_true, const SolutionVector& truth,
                               const CoeffVector& canonical_pred, Oracle& oracle);

}  // namespace dfl

#endif  // DFL_ORACLE_HPP_

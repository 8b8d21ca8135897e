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

// Experiment legs: building learning problems from a configuration, running
// one leg per (regime, capacity or instance kind, seed), writing curves and
// checkpoints, and aggregating the results.
#ifndef DFL_EXPERIMENT_HPP_
#define DFL_EXPERIMENT_HPP_

#include "dfl/dataset.hpp"
#include "dfl/evaluation.hpp"
#include "dfl/scheduling.hpp"
#include "dfl/training.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dfl {

enum class ProblemKind { knapsack_unweighted, knapsack_weighted, scheduling };

std::string to_string(ProblemKind kind);
ProblemKind parse_problem_kind(const std::string& name);

/// A regime with its training oracle: "mse", "mse-r", or "spo-<oracle>" such
/// as "spo-relax", "spo-exact", "spo-greedy", "spo-lp-relax", "spo-mip" and
/// "spo-mip-gap:0.1".
struct RegimeSpec {
  Regime regime = Regime::spo;
  /// Oracle descriptor for spo; empty otherwise.
  std::string oracle;

  std::string label() const;
};

RegimeSpec parse_regime_spec(const std::string& text);

struct ExperimentConfig {
  ProblemKind problem = ProblemKind::knapsack_unweighted;
  std::vector<int> capacities = {10};
  std::vector<std::string> instance_kinds = {"easy-10"};
  /// Scheduling instances come from this seed when set, else from the leg seed.
  std::optional<std::uint64_t> instance_seed;
  std::vector<std::string> regimes = {"mse-r", "spo-relax"};
  std::vector<std::uint64_t> seeds = {1};

  /// Ingested when set; otherwise data is synthesized from the leg seed.
  std::string csv_path;
  int day_count = 200;
  int feature_count = 8;
  double noise_scale = 1.0;

  double learning_rate = 0.01;
  double momentum = 0.9;
  int max_epochs = 30;
  std::optional<double> solver_time_budget_seconds;
  int warmstart_learning_epochs = 0;
  std::optional<double> pretrain_learning_rate;
  std::string solve_warmstart = "none";
  std::optional<long> node_limit;
  /// 0 picks 1 for knapsack and 2 for scheduling.
  int test_stride = 0;
  /// Validation oracle of mse and mse-r; empty picks the family default.
  std::string eval_oracle;
  /// Empty picks exact for knapsack and easy scheduling, relaxation for
  /// hard-like instances.
  std::string test_oracle;
  std::vector<double> grid_learning_rates = {1e-4, 1e-3, 1e-2, 1e-1};
  std::vector<double> grid_momenta = {0.0, 0.5, 0.9};

  std::string output_dir = "dfl-out";
  int jobs = 1;

  void validate() const;
};

/// One run: regime, problem variant and seed.
struct Leg {
  RegimeSpec regime;
  int capacity = 0;
  std::string instance_kind;
  std::uint64_t seed = 0;

  /// Problem variant without the seed, e.g. "cap10" or "easy-10".
  std::string variant() const;
  /// Aggregation group, e.g. "spo-relax/cap10".
  std::string group() const;
  /// File stem, e.g. "spo-relax_cap10_s3".
  std::string name() const;
};

std::vector<Leg> expand_legs(const ExperimentConfig& config);

/// Independent seed for one purpose ("data", "weights", "instance") of a leg.
std::uint64_t derive_seed(std::uint64_t seed, const std::string& purpose);

/// The leg's data and instance before standardization.
struct LegData {
  OptInstance instance;
  Split split;
  /// Set for scheduling legs.
  std::optional<SchedulingInstance> scheduling;
};

LegData build_leg_data(const ExperimentConfig& config, const Leg& leg);

/// Standardizes the split and returns the learning problem and the fitted
/// statistics.
std::pair<LearningProblem, Standardizer> make_problem(LegData data);

TrainConfig train_config(const ExperimentConfig& config, const Leg& leg);
std::string default_test_oracle(const ExperimentConfig& config, const Leg& leg);

/// FNV-1a digest of every setting that shapes a leg except its seed.
std::string config_digest(const ExperimentConfig& config, const Leg& leg);

struct LegOutcome {
  Leg leg;
  std::optional<TrainResult> result;
  std::string error;
  std::string curve_path;
  std::string checkpoint_path;
};

LegOutcome run_leg(const ExperimentConfig& config, const Leg& leg);

struct ExperimentOutcome {
  std::vector<LegOutcome> legs;
  std::optional<AggregateReport> report;
  std::vector<std::string> notes;
  int failed = 0;
};

/// Runs every leg on up to `config.jobs` threads, then writes report.txt and
/// mean_curves.csv for groups with at least two finished runs.
ExperimentOutcome run_experiment(const ExperimentConfig& config);

}  // namespace dfl

#endif  // DFL_EXPERIMENT_HPP_

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

// Training regimes: two-stage MSE, MSE with regret-based selection (MSE-r),
// and SPO with a pluggable oracle.

#ifndef DFL_TRAINING_HPP_
#define DFL_TRAINING_HPP_

#include "dfl/dataset.hpp"
#include "dfl/evaluation.hpp"
#include "dfl/linear_model.hpp"
#include "dfl/oracle.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dfl {

enum class Regime { mse, mse_r, spo };

std::string to_string(Regime regime);
Regime parse_regime(const std::string& name);

/// The optimization problem shared by every day, and the standardized
/// splits. Each day's 48 targets are the coefficients of one instance.
struct LearningProblem {
  OptInstance instance;
  Dataset train;
  Dataset validation;
  Dataset test;
};

struct TrainConfig {
  Regime regime = Regime::spo;
  /// Training oracle for SPO and validation oracle for every regime. Its
  /// warmstart field is the solve warmstart.
  OracleSpec oracle;
  /// Oracle for test regret; no test regret is recorded when absent.
  std::optional<OracleSpec> test_oracle;
  /// Test regret is computed every `test_stride` epochs and at the last.
  int test_stride = 1;
  double learning_rate = 0.01;
  double momentum = 0.0;
  int max_epochs = 10;
  std::uint64_t seed = 0;
  std::optional<double> solver_time_budget_seconds;
  int warmstart_learning_epochs = 0;
  /// Learning rate of the MSE pre-training; `learning_rate` when absent.
  std::optional<double> pretrain_learning_rate;
  /// MSE-r search grid; the single (learning_rate, momentum) when empty.
  std::vector<double> grid_learning_rates;
  std::vector<double> grid_momenta;

  void validate() const;
};

struct GridResult {
  double learning_rate = 0.0;
  double momentum = 0.0;
  int best_epoch = 0;
  double best_val_regret = 0.0;
};

struct TrainResult {
  LinearModel<double> final_model;
  /// Checkpoint with the lowest validation regret (earliest on ties).
  LinearModel<double> best_model;
  int best_epoch = 0;
  double best_val_regret = 0.0;
  LearningCurve curve;
  std::vector<std::string> warnings;
  std::vector<GridResult> grid;
  bool budget_exhausted = false;
  /// Set when training stopped on divergence; the models are the last good
  /// ones.
  std::optional<std::string> aborted;
  long training_solver_calls = 0;
  double training_solver_seconds = 0.0;
  /// Test regret of `final_model` and `best_model` when a test oracle is set.
  std::optional<double> final_test_regret;
  std::optional<double> best_test_regret;
};

/// g = v*(c) - v*(2 c_hat - c) in minimization space, where `truth` is
/// v*(c) and `transformed` is v*(2 c_hat - c).
Eigen::VectorXd spo_subgradient(const SolutionVector& truth, const SolutionVector& transformed);

TrainResult train_mse(const LearningProblem& problem, LinearModel<double> model,
                      const TrainConfig& config);
TrainResult train_mse_r(const LearningProblem& problem, LinearModel<double> model,
                        const TrainConfig& config);
TrainResult train_spo(const LearningProblem& problem, LinearModel<double> model,
                      const TrainConfig& config);
/// Dispatches on `config.regime`.
TrainResult train(const LearningProblem& problem, LinearModel<double> model,
                  const TrainConfig& config);

/// Seeded Fisher-Yates permutation of 0..n-1, identical on every platform.
std::vector<std::size_t> shuffled_order(std::size_t n, std::uint64_t& state);

}  // namespace dfl

#endif  // DFL_TRAINING_HPP_

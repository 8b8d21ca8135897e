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

#include "dfl/training.hpp"

#include "dfl/text.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace dfl {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// One training run: the model, its optimizer, the oracles and caches, and
// the curve being recorded.
class Run {
 public:
  Run(const LearningProblem& problem, const TrainConfig& config, LinearModel<double> model,
      double learning_rate, double momentum, bool with_test)
      : problem_(problem),
        config_(config),
        n_(problem.instance.coefficient_count()),
        train_oracle_(problem.instance, config.oracle),
        val_oracle_(problem.instance, config.oracle),
        shuffle_state_(config.seed) {
    if (with_test && config.test_oracle) {
      test_oracle_.emplace(problem.instance, *config.test_oracle);
    }
    result_.final_model = std::move(model);
    result_.best_model = result_.final_model;
    result_.best_val_regret = std::numeric_limits<double>::infinity();
    state_ = OptimizerState<double>(result_.final_model.feature_count(), learning_rate, momentum);
    train_x_ = problem.train.stacked_features();
    train_y_ = problem.train.stacked_targets();
    for (const Day& day : problem.train.days) {
      if (day.targets.size() != n_) {
        throw DimensionError("training: day " + std::to_string(day.index) + " has " +
                             std::to_string(day.targets.size()) + " targets for an instance of " +
                             std::to_string(n_) + " coefficients");
      }
    }
    start_ = Clock::now();
  }

  LinearModel<double>& model() { return result_.final_model; }
  OptimizerState<double>& state() { return state_; }
  TrainResult& result() { return result_; }
  bool stopped() const { return stopped_; }

  void mse_epoch() {
    for (std::size_t d : shuffled_order(problem_.train.days.size(), shuffle_state_)) {
      const Day& day = problem_.train.days[d];
      const Eigen::VectorXd grad = predict<double>(model(), day.features) - day.targets;
      if (!step(day, grad)) return;
    }
  }

  void spo_epoch() {
    const Sense sense = problem_.instance.sense();
    const double sign = sense_sign(sense);
    for (std::size_t d : shuffled_order(problem_.train.days.size(), shuffle_state_)) {
      const Day& day = problem_.train.days[d];
      const CoeffVector c = canonicalize(sense, day.targets, n_);
      const CoeffVector c_hat = canonicalize(sense, predict<double>(model(), day.features), n_);
      if (budget_spent()) return;
      Eigen::VectorXd grad;
      try {
        const SolutionVector& truth = train_cache_.get(day.index, c, train_oracle_);
        if (budget_spent()) return;
        const SolutionVector transformed = train_oracle_.solve(2.0 * c_hat - c, &truth);
        grad = sign * spo_subgradient(truth, transformed);
      } catch (const SolverError& e) {
        throw TrainingError("training: oracle failed on day " + std::to_string(day.index) +
                            ": " + e.what());
      }
      if (!step(day, grad)) return;
    }
  }

  // Scores the current model and appends a curve point.
  void record(bool last) {
    ++epoch_;
    CurvePoint p;
    p.epoch = epoch_;
    p.train_loss = mse_loss<double>(model(), train_x_, train_y_);
    if (!std::isfinite(p.train_loss)) {
      abort("training loss is not finite at epoch " + std::to_string(epoch_));
    }
    const SplitRegret val = evaluate_split(model(), problem_.validation, problem_.instance,
                                           val_oracle_, &val_cache_);
    if (val.partial() || val.vacuous()) {
      p.val_regret = std::numeric_limits<double>::quiet_NaN();
      result_.warnings.push_back("epoch " + std::to_string(epoch_) +
                                 (val.vacuous() ? ": empty validation split"
                                                : ": validation solves failed, epoch not scored"));
    } else {
      p.val_regret = val.total;
      if (p.val_regret < result_.best_val_regret) {
        result_.best_val_regret = p.val_regret;
        result_.best_epoch = epoch_;
        result_.best_model = model();
      }
    }
    p.solver_s = train_oracle_.seconds() + val_oracle_.seconds();
    if (test_oracle_ && (last || stopped_ || epoch_ % config_.test_stride == 0)) {
      const auto t = Clock::now();
      p.test_regret = test_regret(model());
      if (result_.best_epoch == epoch_) best_test_ = p.test_regret;
      test_seconds_ += seconds_since(t);
    }
    p.wall_s = seconds_since(start_) - test_seconds_;
    result_.curve.points.push_back(p);
  }

  TrainResult finish() {
    result_.training_solver_calls = train_oracle_.calls();
    result_.training_solver_seconds = train_oracle_.seconds();
    if (test_oracle_) {
      const auto& last = result_.curve.points;
      result_.final_test_regret = !last.empty() && last.back().test_regret
                                      ? *last.back().test_regret
                                      : test_regret(model());
      if (result_.best_epoch > 0) {
        result_.best_test_regret = best_test_ ? *best_test_ : test_regret(result_.best_model);
      }
    }
    if (result_.best_epoch == 0) result_.best_val_regret = std::numeric_limits<double>::quiet_NaN();
    auto& meta = result_.curve;
    meta.set_meta("train_oracle", config_.oracle.descriptor());
    meta.set_meta("solve_warmstart", to_string(config_.oracle.warmstart));
    if (config_.test_oracle) meta.set_meta("test_oracle", config_.test_oracle->descriptor());
    meta.set_meta("seed", std::to_string(config_.seed));
    meta.set_meta("learning_rate", format_double(state_.learning_rate));
    meta.set_meta("momentum", format_double(state_.momentum));
    meta.set_meta("best_epoch", std::to_string(result_.best_epoch));
    meta.set_meta("training_solver_calls", std::to_string(result_.training_solver_calls));
    if (result_.budget_exhausted) meta.set_meta("budget_exhausted", "1");
    if (result_.aborted) meta.set_meta("aborted", *result_.aborted);
    if (result_.final_test_regret) {
      meta.set_meta("final_test_regret", format_double(*result_.final_test_regret));
    }
    if (result_.best_test_regret) {
      meta.set_meta("best_test_regret", format_double(*result_.best_test_regret));
    }
    return std::move(result_);
  }

  void abort(const std::string& why) {
    if (!result_.aborted) result_.aborted = why;
    stopped_ = true;
  }

 private:
  bool budget_spent() {
    if (config_.solver_time_budget_seconds &&
        train_oracle_.seconds() >= *config_.solver_time_budget_seconds) {
      result_.budget_exhausted = true;
      stopped_ = true;
      return true;
    }
    return false;
  }

  bool step(const Day& day, const Eigen::VectorXd& grad) {
    const LinearModel<double> backup = model();
    const OptimizerState<double> state_backup = state_;
    try {
      apply_gradient<double>(model(), state_, day.features, grad);
    } catch (const TrainingError& e) {
      model() = backup;
      state_ = state_backup;
      abort(std::string(e.what()) + " on day " + std::to_string(day.index));
      return false;
    }
    return true;
  }

  double test_regret(const LinearModel<double>& model) {
    const SplitRegret r =
        evaluate_split(model, problem_.test, problem_.instance, *test_oracle_, &test_cache_);
    if (r.partial()) {
      result_.warnings.push_back(std::to_string(r.failed.size()) +
                                 " test solves failed; test regret is partial");
    }
    return r.total;
  }

  const LearningProblem& problem_;
  const TrainConfig& config_;
  Eigen::Index n_;
  Oracle train_oracle_;
  Oracle val_oracle_;
  std::optional<Oracle> test_oracle_;
  TrueSolutionCache train_cache_;
  TrueSolutionCache val_cache_;
  TrueSolutionCache test_cache_;
  OptimizerState<double> state_;
  Eigen::MatrixXd train_x_;
  Eigen::VectorXd train_y_;
  TrainResult result_;
  std::optional<double> best_test_;
  std::uint64_t shuffle_state_;
  Clock::time_point start_;
  double test_seconds_ = 0.0;
  int epoch_ = 0;
  bool stopped_ = false;
};

TrainResult run_mse(const LearningProblem& problem, LinearModel<double> model,
                    const TrainConfig& config, double learning_rate, double momentum,
                    bool with_test) {
  Run run(problem, config, std::move(model), learning_rate, momentum, with_test);
  for (int e = 1; e <= config.max_epochs && !run.stopped(); ++e) {
    run.mse_epoch();
    run.record(e == config.max_epochs);
  }
  return run.finish();
}

}  // namespace

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::mse:
      return "mse";
    case Regime::mse_r:
      return "mse-r";
    case Regime::spo:
      return "spo";
  }
  return "?";
}

Regime parse_regime(const std::string& name) {
  if (name == "mse") return Regime::mse;
  if (name == "mse-r") return Regime::mse_r;
  if (name == "spo") return Regime::spo;
  throw ModelError("unknown regime '" + name + "'");
}

void TrainConfig::validate() const {
  if (max_epochs < 0) throw ModelError("train: max_epochs must be nonnegative");
  if (test_stride < 1) throw ModelError("train: test_stride must be positive");
  if (warmstart_learning_epochs < 0) {
    throw ModelError("train: warmstart_learning_epochs must be nonnegative");
  }
  if (warmstart_learning_epochs > 0 && regime != Regime::spo) {
    throw ModelError("train: MSE pre-training only applies to the spo regime");
  }
  if (solver_time_budget_seconds && !(*solver_time_budget_seconds >= 0.0)) {
    throw ModelError("train: solver time budget must be nonnegative");
  }
  OptimizerState<double>(1, learning_rate, momentum);
  if (pretrain_learning_rate) OptimizerState<double>(1, *pretrain_learning_rate, momentum);
  for (double a : grid_learning_rates) OptimizerState<double>(1, a, 0.0);
  for (double m : grid_momenta) OptimizerState<double>(1, 1.0, m);
}

std::vector<std::size_t> shuffled_order(std::size_t n, std::uint64_t& state) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(splitmix64(state) % i);
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

Eigen::VectorXd spo_subgradient(const SolutionVector& truth, const SolutionVector& transformed) {
  if (truth.profile.size() != transformed.profile.size()) {
    throw DimensionError("spo_subgradient: solution size mismatch");
  }
  return truth.profile - transformed.profile;
}

TrainResult train_mse(const LearningProblem& problem, LinearModel<double> model,
                      const TrainConfig& config) {
  config.validate();
  TrainResult result =
      run_mse(problem, std::move(model), config, config.learning_rate, config.momentum, true);
  result.curve.set_meta("regime", "mse");
  if (result.final_test_regret) {
    result.curve.set_meta("reported_test_regret", format_double(*result.final_test_regret));
  }
  return result;
}

TrainResult train_mse_r(const LearningProblem& problem, LinearModel<double> model,
                        const TrainConfig& config) {
  config.validate();
  if (problem.validation.days.empty()) throw ModelError("mse-r: validation split is empty");
  std::vector<double> rates = config.grid_learning_rates;
  std::vector<double> momenta = config.grid_momenta;
  if (rates.empty()) rates = {config.learning_rate};
  if (momenta.empty()) momenta = {config.momentum};

  std::vector<GridResult> grid;
  std::size_t winner = 0;
  for (double rate : rates) {
    for (double mu : momenta) {
      const TrainResult r = run_mse(problem, model, config, rate, mu, false);
      grid.push_back({rate, mu, r.best_epoch, r.best_val_regret});
      const GridResult& best = grid[winner];
      if (r.best_epoch > 0 && (best.best_epoch == 0 || r.best_val_regret < best.best_val_regret)) {
        winner = grid.size() - 1;
      }
    }
  }
  const GridResult chosen = grid[winner];
  TrainResult result =
      run_mse(problem, std::move(model), config, chosen.learning_rate, chosen.momentum, true);
  result.grid = std::move(grid);
  result.curve.set_meta("regime", "mse-r");
  result.curve.set_meta("grid_size", std::to_string(result.grid.size()));
  if (result.best_test_regret) {
    result.curve.set_meta("reported_test_regret", format_double(*result.best_test_regret));
  }
  return result;
}

TrainResult train_spo(const LearningProblem& problem, LinearModel<double> model,
                      const TrainConfig& config) {
  config.validate();
  const double pretrain_rate = config.pretrain_learning_rate.value_or(config.learning_rate);
  const int total = config.warmstart_learning_epochs + config.max_epochs;
  Run run(problem, config, std::move(model), config.learning_rate, config.momentum, true);
  if (config.warmstart_learning_epochs > 0) {
    const OptimizerState<double> spo_state = run.state();
    run.state() = OptimizerState<double>(run.model().feature_count(), pretrain_rate,
                                         config.momentum);
    for (int e = 1; e <= config.warmstart_learning_epochs && !run.stopped(); ++e) {
      run.mse_epoch();
      run.record(e == total);
    }
    run.state() = spo_state;
  }
  for (int e = 1; e <= config.max_epochs && !run.stopped(); ++e) {
    run.spo_epoch();
    run.record(config.warmstart_learning_epochs + e == total);
  }
  TrainResult result = run.finish();
  result.curve.set_meta("regime", "spo");
  result.curve.set_meta("pretrain_epochs", std::to_string(config.warmstart_learning_epochs));
  if (result.final_test_regret) {
    result.curve.set_meta("reported_test_regret", format_double(*result.final_test_regret));
  }
  return result;
}

TrainResult train(const LearningProblem& problem, LinearModel<double> model,
                  const TrainConfig& config) {
  switch (config.regime) {
    case Regime::mse:
      return train_mse(problem, std::move(model), config);
    case Regime::mse_r:
      return train_mse_r(problem, std::move(model), config);
    case Regime::spo:
      return train_spo(problem, std::move(model), config);
  }
  throw ModelError("train: unknown regime");
}

}  // namespace dfl

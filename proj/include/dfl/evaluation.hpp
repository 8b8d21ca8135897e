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

// Split regret, learning curves and multi-seed aggregation.

#ifndef DFL_EVALUATION_HPP_
#define DFL_EVALUATION_HPP_

#include "dfl/dataset.hpp"
#include "dfl/linear_model.hpp"
#include "dfl/oracle.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dfl {

struct SplitRegret {
  double total = 0.0;
  std::vector<RegretValue> per_instance;
  /// Day indices whose solves failed; their regret is not in `total`.
  std::vector<long> failed;
  std::string eval_oracle;

  bool partial() const { return !failed.empty(); }
  bool vacuous() const { return per_instance.empty() && failed.empty(); }
};

/// Sums regret(day, theta, predict(model, x), oracle) over the days of
/// `split`. Predictions are made on the split's features as stored. When
/// `cache` is given, true solutions are taken from it.
SplitRegret evaluate_split(const LinearModel<double>& model, const Dataset& split,
                           const OptInstance& instance, Oracle& oracle,
                           TrueSolutionCache* cache = nullptr);

struct CurvePoint {
  int epoch = 0;
  double solver_s = 0.0;
  double wall_s = 0.0;
  double train_loss = 0.0;
  /// NaN when the epoch was not scored.
  double val_regret = 0.0;
  std::optional<double> test_regret;

  bool operator==(const CurvePoint& other) const;
};

using Metadata = std::vector<std::pair<std::string, std::string>>;

struct LearningCurve {
  std::vector<CurvePoint> points;
  Metadata metadata;

  /// Value of a metadata key; empty when absent.
  std::string meta(const std::string& key) const;
  void set_meta(const std::string& key, const std::string& value);
  void validate() const;
  bool operator==(const LearningCurve& other) const;
};

/// Metadata lines start with '#', then the header
/// `epoch,solver_s,wall_s,train_loss,val_regret,test_regret`.
void write_curve(std::ostream& out, const LearningCurve& curve);
LearningCurve read_curve(std::istream& in);
void save_curve(const std::string& path, const LearningCurve& curve);
LearningCurve load_curve(const std::string& path);

struct TracePoint {
  int epoch = 0;
  double train_mse = 0.0;
  double val_regret = 0.0;
};

std::vector<TracePoint> mse_vs_regret_trace(const LearningCurve& curve);

struct AggregateRow {
  std::string group;
  std::string config_digest;
  std::vector<std::string> seeds;
  double mean_test_regret = 0.0;
  double sd_test_regret = 0.0;
  /// Mean and sd over seeds of the per-epoch solver seconds.
  double mean_epoch_solver_s = 0.0;
  double sd_epoch_solver_s = 0.0;
  /// Per-epoch mean curve, truncated to the shortest run.
  std::vector<CurvePoint> mean_curve;
};

struct AggregateReport {
  std::string group_key;
  std::vector<AggregateRow> rows;

  const AggregateRow* find(const std::string& group) const;
};

/// Test regret that represents a finished run: the `reported_test_regret`
/// metadata when present, otherwise the last recorded test regret.
std::optional<double> reported_test_regret(const LearningCurve& curve);

/// Groups curves by the value of metadata `group_key` (in order of first
/// appearance). Every group needs at least 2 curves sharing one
/// `config_digest`.
AggregateReport aggregate(const std::vector<LearningCurve>& curves, const std::string& group_key);

/// One row per group: group,digest,seeds,runs,mean_test_regret,sd_test_regret,
/// mean_epoch_solver_s,sd_epoch_solver_s.
void write_report(std::ostream& out, const AggregateReport& report);
/// One row per group and epoch of the mean curve.
void write_mean_curves(std::ostream& out, const AggregateReport& report);

double mean(const std::vector<double>& values);
/// Sample (n - 1) standard deviation; 0 for fewer than 2 values.
double sample_sd(const std::vector<double>& values);

}  // namespace dfl

#endif  // DFL_EVALUATION_HPP_

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

// Day-grouped price data: CSV ingestion and emission, the synthetic
// generator, the weighted-knapsack value transform and the chronological
// split.

#ifndef DFL_DATASET_HPP_
#define DFL_DATASET_HPP_

#include "dfl/linear_model.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace dfl {

inline constexpr int kSlotsPerDay = 48;

/// One day of 48 half-hour slots. Row s of `features` and entry s of
/// `targets` belong to slot s.
struct Day {
  long index = 0;
  Eigen::MatrixXd features;
  Eigen::VectorXd targets;

  bool operator==(const Day& other) const;
};

struct Dataset {
  std::vector<std::string> feature_names;
  std::vector<Day> days;
  /// Per-slot knapsack weights shared by every day; empty when unweighted.
  std::vector<int> item_weights;

  Eigen::Index feature_count() const {
    return static_cast<Eigen::Index>(feature_names.size());
  }
  std::size_t slot_count() const { return days.size() * kSlotsPerDay; }
  /// Rows over all days; equals slot_count() for validated datasets.
  std::size_t row_count() const;
  /// All days stacked in order.
  Eigen::MatrixXd stacked_features() const;
  Eigen::VectorXd stacked_targets() const;
  void validate() const;

  bool operator==(const Dataset& other) const;
};

/// Reads the CSV schema `day,slot,<feature columns>,actual_price`. Other
/// `actual_*` columns are dropped. Days missing any slot are dropped and a
/// warning is appended to `warnings`.
Dataset ingest_csv(std::istream& in, std::vector<std::string>* warnings = nullptr);
Dataset ingest_csv(const std::string& path, std::vector<std::string>* warnings = nullptr);

void write_csv(std::ostream& out, const Dataset& dataset);
void write_csv(const std::string& path, const Dataset& dataset);

/// Feature/target generator standing in for day-ahead price data. With
/// `noise_scale` 0 the price is exactly `synthetic_truth` applied to the
/// features.
Dataset synthesize(std::uint64_t seed, int day_count, int feature_count = 8,
                   double noise_scale = 1.0);

/// The linear part of the synthetic price map for `feature_count` features.
LinearModel<double> synthetic_truth(int feature_count);

inline double weighted_value(double value, int weight, double noise) {
  return (value + noise) * weight;
}

/// Draws per-slot weights from {3,5,7} (fixed across days) and replaces
/// every value v with (v + xi) * w, xi ~ Normal(0, sd 25).
Dataset to_weighted_knapsack(const Dataset& dataset, std::uint64_t seed);

struct Split {
  Dataset train;
  Dataset validation;
  Dataset test;
};

/// Chronological 70/10/20 split by whole days: floor on train and
/// validation, the remainder goes to test.
Split split_dataset(const Dataset& dataset);

/// Fits feature statistics on the training split and rewrites every split's
/// features with them.
Standardizer standardize(Split& split);

}  // namespace dfl

#endif  // DFL_DATASET_HPP_

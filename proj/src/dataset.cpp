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

#include "dfl/dataset.hpp"

#include "dfl/text.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

namespace dfl {
namespace {

constexpr const char* kTargetColumn = "actual_price";

const char* const kSyntheticNames[] = {"slot_sin",      "slot_cos",      "weekend",
                                       "load_forecast", "wind_forecast", "temperature",
                                       "gas_index"};
constexpr int kNamedSynthetic = 7;
constexpr double kSpike = 40.0;
constexpr double kDip = 9.0;
constexpr double kWindPhi = 0.95;

// Copies days [first, last) into a dataset sharing `source`'s schema.
Dataset slice(const Dataset& source, std::size_t first, std::size_t last) {
  Dataset out;
  out.feature_names = source.feature_names;
  out.item_weights = source.item_weights;
  out.days.assign(source.days.begin() + static_cast<std::ptrdiff_t>(first),
                  source.days.begin() + static_cast<std::ptrdiff_t>(last));
  return out;
}

}  // namespace

bool Day::operator==(const Day& other) const {
  return index == other.index && features.rows() == other.features.rows() &&
         features.cols() == other.features.cols() && features == other.features &&
         targets.size() == other.targets.size() && targets == other.targets;
}

bool Dataset::operator==(const Dataset& other) const {
  return feature_names == other.feature_names && item_weights == other.item_weights &&
         days == other.days;
}

Eigen::MatrixXd Dataset::stacked_features() const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(row_count()), feature_count());
  Eigen::Index row = 0;
  for (const Day& day : days) {
    out.middleRows(row, day.features.rows()) = day.features;
    row += day.features.rows();
  }
  return out;
}

Eigen::VectorXd Dataset::stacked_targets() const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(row_count()));
  Eigen::Index row = 0;
  for (const Day& day : days) {
    out.segment(row, day.targets.size()) = day.targets;
    row += day.targets.size();
  }
  return out;
}

std::size_t Dataset::row_count() const {
  std::size_t rows = 0;
  for (const Day& day : days) rows += static_cast<std::size_t>(day.targets.size());
  return rows;
}

void Dataset::validate() const {
  if (feature_names.empty()) throw DimensionError("dataset: no feature columns");
  if (!item_weights.empty() && item_weights.size() != kSlotsPerDay) {
    throw DimensionError("dataset: item weights must cover 48 slots");
  }
  for (std::size_t d = 0; d < days.size(); ++d) {
    const Day& day = days[d];
    if (day.features.rows() != kSlotsPerDay || day.targets.size() != kSlotsPerDay ||
        day.features.cols() != feature_count()) {
      throw DimensionError("dataset: day " + std::to_string(day.index) + " is malformed");
    }
    if (d > 0 && day.index <= days[d - 1].index) {
      throw ModelError("dataset: days must be strictly increasing");
    }
  }
}

Dataset ingest_csv(std::istream& in, std::vector<std::string>* warnings) {
  std::string line;
  int line_no = 0;
  std::vector<int> weights;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      const auto fields = split_whitespace(body.substr(1));
      if (!fields.empty() && fields.front() == "item_weights") {
        for (std::size_t i = 1; i < fields.size(); ++i) {
          weights.push_back(static_cast<int>(
              parse_long(fields[i], "csv line " + std::to_string(line_no))));
        }
      }
      continue;
    }
    for (const auto& name : split(body, ',')) header.emplace_back(trim(name));
    break;
  }
  if (header.size() < 4 || header[0] != "day" || header[1] != "slot" ||
      header.back() != kTargetColumn) {
    throw ParseError("csv: header must be day,slot,<features...>,actual_price");
  }

  Dataset data;
  data.item_weights = std::move(weights);
  std::vector<std::size_t> feature_columns;
  for (std::size_t c = 2; c + 1 < header.size(); ++c) {
    if (header[c].rfind("actual_", 0) == 0) continue;
    feature_columns.push_back(c);
    data.feature_names.push_back(header[c]);
  }
  if (feature_columns.empty()) throw ParseError("csv: no feature columns");
  const Eigen::Index p = data.feature_count();

  struct Partial {
    Day day;
    std::vector<bool> seen;
    int count = 0;
  };
  std::map<long, Partial> partial;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const std::string where = "csv line " + std::to_string(line_no);
    const auto fields = split(body, ',');
    if (fields.size() != header.size()) {
      throw ParseError(where + ": expected " + std::to_string(header.size()) + " fields, found " +
                       std::to_string(fields.size()));
    }
    const long day = parse_long(trim(fields[0]), where);
    const long slot = parse_long(trim(fields[1]), where);
    if (slot < 0 || slot >= kSlotsPerDay) throw ParseError(where + ": slot out of range");
    auto [it, inserted] = partial.try_emplace(day);
    Partial& part = it->second;
    if (inserted) {
      part.day.index = day;
      part.day.features = Eigen::MatrixXd::Zero(kSlotsPerDay, p);
      part.day.targets = Eigen::VectorXd::Zero(kSlotsPerDay);
      part.seen.assign(kSlotsPerDay, false);
    }
    if (part.seen[slot]) throw ParseError(where + ": duplicate slot for day " + fields[0]);
    part.seen[slot] = true;
    ++part.count;
    for (Eigen::Index j = 0; j < p; ++j) {
      part.day.features(slot, j) = parse_double(trim(fields[feature_columns[j]]), where);
    }
    part.day.targets[slot] = parse_double(trim(fields.back()), where);
  }
  for (auto& [index, part] : partial) {
    if (part.count != kSlotsPerDay) {
      if (warnings) {
        warnings->push_back("day " + std::to_string(index) + " has " +
                            std::to_string(part.count) + " of 48 slots; dropped");
      }
      continue;
    }
    data.days.push_back(std::move(part.day));
  }
  data.validate();
  return data;
}

Dataset ingest_csv(const std::string& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  return ingest_csv(in, warnings);
}

void write_csv(std::ostream& out, const Dataset& dataset) {
  dataset.validate();
  if (!dataset.item_weights.empty()) {
    out << "# item_weights";
    for (int w : dataset.item_weights) out << ' ' << w;
    out << '\n';
  }
  out << "day,slot";
  for (const auto& name : dataset.feature_names) out << ',' << name;
  out << ',' << kTargetColumn << '\n';
  for (const Day& day : dataset.days) {
    for (int s = 0; s < kSlotsPerDay; ++s) {
      out << day.index << ',' << s;
      for (Eigen::Index j = 0; j < dataset.feature_count(); ++j) {
        out << ',' << format_double(day.features(s, j));
      }
      out << ',' << format_double(day.targets[s]) << '\n';
    }
  }
}

void write_csv(const std::string& path, const Dataset& dataset) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_csv(out, dataset);
}

LinearModel<double> synthetic_truth(int feature_count) {
  if (feature_count < 4) throw DimensionError("synthesize: need at least 4 features");
  static const double kWeights[kNamedSynthetic] = {2.0, -3.0, -4.0, 2.0, -6.0, 0.3, 5.0};
  LinearModel<double> truth(feature_count);
  for (int j = 0; j < std::min(feature_count, kNamedSynthetic); ++j) truth.weights[j] = kWeights[j];
  truth.bias = 35.0;
  return truth;
}

Dataset synthesize(std::uint64_t seed, int day_count, int feature_count, double noise_scale) {
  if (day_count < 10) throw ModelError("synthesize: need at least 10 days");
  if (!(noise_scale >= 0.0)) throw ModelError("synthesize: noise scale must be nonnegative");
  const LinearModel<double> truth = synthetic_truth(feature_count);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;

  Dataset data;
  for (int j = 0; j < feature_count; ++j) {
    data.feature_names.push_back(j < kNamedSynthetic ? kSyntheticNames[j]
                                                     : "aux_" + std::to_string(j - kNamedSynthetic));
  }

  double level = 0.0;
  double wind = 0.0;
  double gas = 0.0;
  double noise = 0.0;
  for (int d = 0; d < day_count; ++d) {
    Day day;
    day.index = d;
    day.features = Eigen::MatrixXd::Zero(kSlotsPerDay, feature_count);
    day.targets = Eigen::VectorXd::Zero(kSlotsPerDay);
    level = 0.8 * level + 0.6 * normal(rng);
    gas = 0.97 * gas + 0.1 * normal(rng);
    const bool weekend = d % 7 >= 5;
    const double temp = 12.0 + 8.0 * std::sin(2.0 * std::numbers::pi * d / 365.0) + 2.0 * normal(rng);
    for (int s = 0; s < kSlotsPerDay; ++s) {
      wind = kWindPhi * wind + std::sqrt(1.0 - kWindPhi * kWindPhi) * normal(rng);
      const double phase = 2.0 * std::numbers::pi * s / kSlotsPerDay;
      const double profile = 0.6 * std::exp(-std::pow((s - 17) / 4.0, 2)) +
                             std::exp(-std::pow((s - 37) / 4.0, 2)) - 0.3;
      const double load = level + profile - (weekend ? 0.4 : 0.0) +
                          0.01 * (temp - 12.0) * (temp - 12.0) + 0.2 * normal(rng);

      Eigen::RowVectorXd x = Eigen::RowVectorXd::Zero(feature_count);
      x[0] = std::sin(phase);
      x[1] = std::cos(phase);
      x[2] = weekend ? 1.0 : 0.0;
      x[3] = load + 0.15 * normal(rng);
      if (feature_count > 4) x[4] = wind + 0.15 * normal(rng);
      if (feature_count > 5) x[5] = temp + normal(rng);
      if (feature_count > 6) x[6] = gas;
      for (int j = kNamedSynthetic; j < feature_count; ++j) x[j] = normal(rng);

      noise = 0.7 * noise + 3.0 * normal(rng);
      const double spike = std::max(0.0, load - 1.0);
      const double dip = std::max(0.0, wind - 1.0);
      const double residual = noise + kSpike * spike * spike - kDip * dip * dip;
      day.features.row(s) = x;
      day.targets[s] = truth.weights.dot(x.transpose()) + truth.bias + noise_scale * residual;
    }
    data.days.push_back(std::move(day));
  }
  return data;
}

Dataset to_weighted_knapsack(const Dataset& dataset, std::uint64_t seed) {
  dataset.validate();
  std::mt19937_64 rng(seed);
  static const int kWeightSet[] = {3, 5, 7};
  std::uniform_int_distribution<int> pick(0, 2);
  std::normal_distribution<double> xi(0.0, 25.0);
  Dataset out = dataset;
  out.item_weights.resize(kSlotsPerDay);
  for (int& w : out.item_weights) w = kWeightSet[pick(rng)];
  for (Day& day : out.days) {
    for (int s = 0; s < kSlotsPerDay; ++s) {
      day.targets[s] = weighted_value(day.targets[s], out.item_weights[s], xi(rng));
    }
  }
  return out;
}

Split split_dataset(const Dataset& dataset) {
  const std::size_t n = dataset.days.size();
  const std::size_t train = 7 * n / 10;
  const std::size_t validation = n / 10;
  if (train == 0 || validation == 0 || train + validation >= n) {
    throw ModelError("split: " + std::to_string(n) + " days are too few for a 70/10/20 split");
  }
  return {slice(dataset, 0, train), slice(dataset, train, train + validation),
          slice(dataset, train + validation, n)};
}

Standardizer standardize(Split& split) {
  const Standardizer s = Standardizer::fit(split.train.stacked_features());
  for (Dataset* part : {&split.train, &split.validation, &split.test}) {
    for (Day& day : part->days) day.features = s.apply(day.features);
  }
  return s;
}

}  // namespace dfl

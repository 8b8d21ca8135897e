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

#include "dfl/linear_model.hpp"

#include "dfl/text.hpp"

#include <fstream>
#include <ostream>

namespace dfl {
namespace {

void write_vector(std::ostream& out, const char* key, const Eigen::VectorXd& v) {
  out << key;
  for (Eigen::Index i = 0; i < v.size(); ++i) out << ' ' << format_double(v[i]);
  out << '\n';
}

Eigen::VectorXd read_vector(const std::vector<std::string>& fields, Eigen::Index expected,
                            const std::string& where) {
  if (static_cast<Eigen::Index>(fields.size()) != expected + 1) {
    throw ParseError(where + ": expected " + std::to_string(expected) + " values after '" +
                     fields.front() + "'");
  }
  Eigen::VectorXd v(expected);
  for (Eigen::Index i = 0; i < expected; ++i) v[i] = parse_double(fields[i + 1], where);
  return v;
}

}  // namespace

Standardizer Standardizer::identity(Eigen::Index feature_count) {
  return {Eigen::VectorXd::Zero(feature_count), Eigen::VectorXd::Ones(feature_count)};
}

Standardizer Standardizer::fit(const Eigen::MatrixXd& features) {
  if (features.rows() == 0) throw DimensionError("Standardizer: no rows to fit");
  Standardizer s;
  s.mean = features.colwise().mean().transpose();
  s.scale = Eigen::VectorXd::Ones(features.cols());
  const double n = static_cast<double>(features.rows());
  for (Eigen::Index j = 0; j < features.cols(); ++j) {
    const double var = (features.col(j).array() - s.mean[j]).square().sum() / n;
    if (var > 1e-24) s.scale[j] = std::sqrt(var);
  }
  return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& features) const {
  if (features.cols() != mean.size()) {
    throw DimensionError("Standardizer: expected " + std::to_string(mean.size()) +
                         " feature columns, got " + std::to_string(features.cols()));
  }
  Eigen::MatrixXd out = features.rowwise() - mean.transpose();
  return out.array().rowwise() / scale.transpose().array();
}

bool Standardizer::operator==(const Standardizer& other) const {
  return mean.size() == other.mean.size() && mean == other.mean && scale == other.scale;
}

Eigen::VectorXd Checkpoint::predict_raw(const Eigen::MatrixXd& raw_features) const {
  return predict<double>(model, standardizer.apply(raw_features));
}

bool Checkpoint::operator==(const Checkpoint& other) const {
  return model == other.model && standardizer == other.standardizer &&
         metadata == other.metadata;
}

void write_checkpoint(std::ostream& out, const Checkpoint& checkpoint) {
  const Eigen::Index p = checkpoint.model.feature_count();
  if (checkpoint.standardizer.feature_count() != p) {
    throw DimensionError("checkpoint: standardizer does not match model");
  }
  out << "# dfl linear model\n";
  out << "features " << p << '\n';
  write_vector(out, "weights", checkpoint.model.weights);
  out << "bias " << format_double(checkpoint.model.bias) << '\n';
  write_vector(out, "mean", checkpoint.standardizer.mean);
  write_vector(out, "scale", checkpoint.standardizer.scale);
  for (const auto& [key, value] : checkpoint.metadata) {
    if (key.empty() || key.find_first_of(" \t\n") != std::string::npos ||
        value.find('\n') != std::string::npos) {
      throw ModelError("checkpoint: metadata key '" + key + "' is not writable");
    }
    out << "meta " << key << ' ' << value << '\n';
  }
}

Checkpoint read_checkpoint(std::istream& in) {
  Checkpoint cp;
  std::string line;
  int line_no = 0;
  Eigen::Index p = -1;
  bool have_weights = false;
  bool have_bias = false;
  bool have_mean = false;
  bool have_scale = false;
  auto where = [&line_no] { return "checkpoint line " + std::to_string(line_no); };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    if (line.rfind("meta ", 0) == 0) {
      const std::string rest = line.substr(5);
      const auto space = rest.find(' ');
      if (space == std::string::npos || space == 0) throw ParseError(where() + ": bad meta line");
      cp.metadata.emplace_back(rest.substr(0, space), rest.substr(space + 1));
      continue;
    }
    const auto fields = split_whitespace(line);
    if (fields.empty()) continue;
    const std::string& key = fields.front();
    if (key == "features" && fields.size() == 2) {
      p = parse_long(fields[1], where());
      if (p <= 0) throw ParseError(where() + ": feature count must be positive");
    } else if (p < 0) {
      throw ParseError(where() + ": 'features' must come first");
    } else if (key == "weights") {
      cp.model.weights = read_vector(fields, p, where());
      have_weights = true;
    } else if (key == "bias" && fields.size() == 2) {
      cp.model.bias = parse_double(fields[1], where());
      have_bias = true;
    } else if (key == "mean") {
      cp.standardizer.mean = read_vector(fields, p, where());
      have_mean = true;
    } else if (key == "scale") {
      cp.standardizer.scale = read_vector(fields, p, where());
      have_scale = true;
    } else {
      throw ParseError(where() + ": unrecognized line '" + line + "'");
    }
  }
  if (!have_weights || !have_bias) throw ParseError("checkpoint: missing weights or bias");
  if (!have_mean) cp.standardizer.mean = Eigen::VectorXd::Zero(p);
  if (!have_scale) cp.standardizer.scale = Eigen::VectorXd::Ones(p);
  return cp;
}

void save_checkpoint(const std::string& path, const Checkpoint& checkpoint) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_checkpoint(out, checkpoint);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  return read_checkpoint(in);
}

}  // namespace dfl

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

#include "dfl/evaluation.hpp"

#include "dfl/text.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>

namespace dfl {
namespace {

constexpr const char* kCurveHeader = "epoch,solver_s,wall_s,train_loss,val_regret,test_regret";

bool same_double(double a, double b) {
  return (std::isnan(a) && std::isnan(b)) || a == b;
}

}  // namespace

SplitRegret evaluate_split(const LinearModel<double>& model, const Dataset& split,
                           const OptInstance& instance, Oracle& oracle,
                           TrueSolutionCache* cache) {
  SplitRegret out;
  out.eval_oracle = oracle.spec().descriptor();
  const Eigen::Index n = instance.coefficient_count();
  for (const Day& day : split.days) {
    const CoeffVector c = canonicalize(instance.sense(), day.targets, n);
    const CoeffVector c_hat = canonicalize(instance.sense(), predict<double>(model, day.features), n);
    try {
      const SolutionVector truth = cache ? cache->get(day.index, c, oracle) : oracle.solve(c);
      RegretValue r = regret_given_truth(c, truth, c_hat, oracle);
      out.total += r.regret;
      out.per_instance.push_back(std::move(r));
    } catch (const SolverError&) {
      out.failed.push_back(day.index);
    }
  }
  return out;
}

bool CurvePoint::operator==(const CurvePoint& other) const {
  return epoch == other.epoch && same_double(solver_s, other.solver_s) &&
         same_double(wall_s, other.wall_s) && same_double(train_loss, other.train_loss) &&
         same_double(val_regret, other.val_regret) &&
         test_regret.has_value() == other.test_regret.has_value() &&
         (!test_regret || same_double(*test_regret, *other.test_regret));
}

std::string LearningCurve::meta(const std::string& key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return v;
  }
  return {};
}

void LearningCurve::set_meta(const std::string& key, const std::string& value) {
  for (auto& [k, v] : metadata) {
    if (k == key) {
      v = value;
      return;
    }
  }
  metadata.emplace_back(key, value);
}

void LearningCurve::validate() const {
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].epoch <= points[i - 1].epoch) {
      throw ModelError("curve: epochs must be strictly increasing");
    }
    if (points[i].solver_s < points[i - 1].solver_s || points[i].wall_s < points[i - 1].wall_s) {
      throw ModelError("curve: cumulative times must be nondecreasing");
    }
  }
}

bool LearningCurve::operator==(const LearningCurve& other) const {
  return points == other.points && metadata == other.metadata;
}

void write_curve(std::ostream& out, const LearningCurve& curve) {
  curve.validate();
  for (const auto& [key, value] : curve.metadata) {
    if (key.empty() || key.find_first_of(" \t\n,") != std::string::npos ||
        value.find('\n') != std::string::npos) {
      throw ModelError("curve: metadata key '" + key + "' is not writable");
    }
    out << "# " << key << ' ' << value << '\n';
  }
  out << kCurveHeader << '\n';
  for (const CurvePoint& p : curve.points) {
    out << p.epoch << ',' << format_double(p.solver_s) << ',' << format_double(p.wall_s) << ','
        << format_double(p.train_loss) << ',' << format_double(p.val_regret) << ',';
    if (p.test_regret) out << format_double(*p.test_regret);
    out << '\n';
  }
}

LearningCurve read_curve(std::istream& in) {
  LearningCurve curve;
  std::string line;
  int line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = "curve line " + std::to_string(line_no);
    if (!header && line.front() == '#') {
      const std::string rest = line.size() > 2 ? line.substr(2) : std::string();
      const auto space = rest.find(' ');
      if (space == std::string::npos) {
        curve.metadata.emplace_back(rest, std::string());
      } else {
        curve.metadata.emplace_back(rest.substr(0, space), rest.substr(space + 1));
      }
      continue;
    }
    if (!header) {
      if (trim(line) != kCurveHeader) throw ParseError(where + ": unexpected curve header");
      header = true;
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 6) throw ParseError(where + ": expected 6 fields");
    CurvePoint p;
    p.epoch = static_cast<int>(parse_long(fields[0], where));
    p.solver_s = parse_double(fields[1], where);
    p.wall_s = parse_double(fields[2], where);
    p.train_loss = parse_double(fields[3], where);
    p.val_regret = parse_double(fields[4], where);
    if (!trim(fields[5]).empty()) p.test_regret = parse_double(fields[5], where);
    curve.points.push_back(p);
  }
  if (!header) throw ParseError("curve: missing header");
  curve.validate();
  return curve;
}

void save_curve(const std::string& path, const LearningCurve& curve) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_curve(out, curve);
}

LearningCurve load_curve(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  return read_curve(in);
}

std::vector<TracePoint> mse_vs_regret_trace(const LearningCurve& curve) {
  std::vector<TracePoint> out;
  for (const CurvePoint& p : curve.points) {
    if (std::isnan(p.val_regret)) {
      throw ModelError("trace: epoch " + std::to_string(p.epoch) + " has no validation regret");
    }
    out.push_back({p.epoch, p.train_loss, p.val_regret});
  }
  return out;
}

const AggregateRow* AggregateReport::find(const std::string& group) const {
  for (const auto& row : rows) {
    if (row.group == group) return &row;
  }
  return nullptr;
}

double mean(const std::vector<double>& values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double sample_sd(const std::vector<double>& values) {
  if (values.size() < 2) return 0.0;
  const double m = mean(values);
  double sq = 0.0;
  for (double v : values) sq += (v - m) * (v - m);
  return std::sqrt(sq / static_cast<double>(values.size() - 1));
}

std::optional<double> reported_test_regret(const LearningCurve& curve) {
  const std::string reported = curve.meta("reported_test_regret");
  if (!reported.empty()) return parse_double(reported, "reported_test_regret");
  for (auto it = curve.points.rbegin(); it != curve.points.rend(); ++it) {
    if (it->test_regret) return it->test_regret;
  }
  return std::nullopt;
}

AggregateReport aggregate(const std::vector<LearningCurve>& curves,
                          const std::string& group_key) {
  AggregateReport report;
  report.group_key = group_key;
  std::vector<std::string> order;
  std::map<std::string, std::vector<const LearningCurve*>> groups;
  for (const auto& curve : curves) {
    const std::string group = curve.meta(group_key);
    if (groups.find(group) == groups.end()) order.push_back(group);
    groups[group].push_back(&curve);
  }
  for (const auto& group : order) {
    const auto& members = groups[group];
    AggregateRow row;
    row.group = group;
    row.config_digest = members.front()->meta("config_digest");
    if (members.size() < 2) {
      throw ModelError("aggregate: group '" + group + "' has fewer than 2 runs");
    }
    std::vector<double> finals;
    std::vector<double> epoch_solver;
    std::size_t shortest = std::numeric_limits<std::size_t>::max();
    for (const LearningCurve* c : members) {
      if (c->meta("config_digest") != row.config_digest) {
        throw ModelError("aggregate: group '" + group + "' mixes configurations");
      }
      row.seeds.push_back(c->meta("seed"));
      const auto final_regret = reported_test_regret(*c);
      if (!final_regret) throw ModelError("aggregate: a run in '" + group + "' has no test regret");
      finals.push_back(*final_regret);
      if (!c->points.empty()) {
        epoch_solver.push_back(c->points.back().solver_s / static_cast<double>(c->points.size()));
      }
      shortest = std::min(shortest, c->points.size());
    }
    row.mean_test_regret = mean(finals);
    row.sd_test_regret = sample_sd(finals);
    row.mean_epoch_solver_s = epoch_solver.empty() ? 0.0 : mean(epoch_solver);
    row.sd_epoch_solver_s = sample_sd(epoch_solver);
    for (std::size_t i = 0; i < shortest; ++i) {
      CurvePoint p;
      p.epoch = members.front()->points[i].epoch;
      const double k = static_cast<double>(members.size());
      bool all_test = true;
      double test_sum = 0.0;
      p.val_regret = 0.0;
      for (const LearningCurve* c : members) {
        const CurvePoint& q = c->points[i];
        p.solver_s += q.solver_s / k;
        p.wall_s += q.wall_s / k;
        p.train_loss += q.train_loss / k;
        p.val_regret += q.val_regret / k;
        if (q.test_regret) {
          test_sum += *q.test_regret / k;
        } else {
          all_test = false;
        }
      }
      if (all_test) p.test_regret = test_sum;
      row.mean_curve.push_back(p);
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

void write_report(std::ostream& out, const AggregateReport& report) {
  out << report.group_key
      << ",config_digest,seeds,runs,mean_test_regret,sd_test_regret,mean_epoch_solver_s,"
         "sd_epoch_solver_s\n";
  for (const auto& row : report.rows) {
    out << row.group << ',' << row.config_digest << ',';
    for (std::size_t i = 0; i < row.seeds.size(); ++i) out << (i ? ";" : "") << row.seeds[i];
    out << ',' << row.seeds.size() << ',' << format_double(row.mean_test_regret) << ','
        << format_double(row.sd_test_regret) << ',' << format_double(row.mean_epoch_solver_s)
        << ',' << format_double(row.sd_epoch_solver_s) << '\n';
  }
}

void write_mean_curves(std::ostream& out, const AggregateReport& report) {
  out << report.group_key << ',' << kCurveHeader << '\n';
  for (const auto& row : report.rows) {
    for (const CurvePoint& p : row.mean_curve) {
      out << row.group << ',' << p.epoch << ',' << format_double(p.solver_s) << ','
          << format_double(p.wall_s) << ',' << format_double(p.train_loss) << ','
          << format_double(p.val_regret) << ',';
      if (p.test_regret) out << format_double(*p.test_regret);
      out << '\n';
    }
  }
}

}  // namespace dfl

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

#include "dfl/experiment.hpp"

#include "dfl/text.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace dfl {
namespace {

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (const T& v : values) {
    if (!out.empty()) out += ",";
    if constexpr (std::is_same_v<T, double>) {
      out += format_double(v);
    } else if constexpr (std::is_same_v<T, std::string>) {
      out += v;
    } else {
      out += std::to_string(v);
    }
  }
  return out;
}

Family family_of(ProblemKind kind) {
  return kind == ProblemKind::scheduling ? Family::milp_scheduling : Family::knapsack;
}

}  // namespace

std::string to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::knapsack_unweighted:
      return "knapsack-unweighted";
    case ProblemKind::knapsack_weighted:
      return "knapsack-weighted";
    case ProblemKind::scheduling:
      return "scheduling";
  }
  return "?";
}

ProblemKind parse_problem_kind(const std::string& name) {
  if (name == "knapsack-unweighted" || name == "knapsack") return ProblemKind::knapsack_unweighted;
  if (name == "knapsack-weighted") return ProblemKind::knapsack_weighted;
  if (name == "scheduling") return ProblemKind::scheduling;
  throw ModelError("unknown problem '" + name + "'");
}

std::string RegimeSpec::label() const {
  if (regime == Regime::spo) return "spo-" + oracle;
  return to_string(regime);
}

RegimeSpec parse_regime_spec(const std::string& text) {
  if (text == "mse") return {Regime::mse, ""};
  if (text == "mse-r") return {Regime::mse_r, ""};
  if (text.rfind("spo-", 0) == 0 && text.size() > 4) return {Regime::spo, text.substr(4)};
  throw ModelError("unknown regime '" + text + "'; expected mse, mse-r or spo-<oracle>");
}

void ExperimentConfig::validate() const {
  const Family family = family_of(problem);
  if (regimes.empty()) throw ModelError("config: no regimes");
  if (seeds.empty()) throw ModelError("config: no seeds");
  for (const auto& r : regimes) {
    const RegimeSpec spec = parse_regime_spec(r);
    if (spec.regime == Regime::spo && !oracle_valid_for(parse_oracle(spec.oracle, family), family)) {
      throw ModelError("config: oracle '" + spec.oracle + "' does not fit " + to_string(problem));
    }
  }
  if (problem == ProblemKind::scheduling) {
    if (instance_kinds.empty()) throw ModelError("config: no instance kinds");
    for (const auto& k : instance_kinds) parse_instance_kind(k);
  } else {
    if (capacities.empty()) throw ModelError("config: no capacities");
    for (int c : capacities) {
      if (c < 0) throw ModelError("config: capacities must be nonnegative");
    }
  }
  for (const std::string* o : {&eval_oracle, &test_oracle}) {
    if (!o->empty() && !oracle_valid_for(parse_oracle(*o, family), family)) {
      throw ModelError("config: oracle '" + *o + "' does not fit " + to_string(problem));
    }
  }
  if (csv_path.empty() && day_count < 10) throw ModelError("config: day_count must be at least 10");
  if (feature_count < 4) throw ModelError("config: feature_count must be at least 4");
  if (!(noise_scale >= 0.0)) throw ModelError("config: noise_scale must be nonnegative");
  if (test_stride < 0) throw ModelError("config: test_stride must be nonnegative");
  if (jobs < 1) throw ModelError("config: jobs must be positive");
  if (node_limit && *node_limit < 1) throw ModelError("config: node_limit must be positive");
  parse_warmstart(solve_warmstart);
  TrainConfig probe;
  probe.learning_rate = learning_rate;
  probe.momentum = momentum;
  probe.max_epochs = max_epochs;
  probe.solver_time_budget_seconds = solver_time_budget_seconds;
  probe.pretrain_learning_rate = pretrain_learning_rate;
  probe.grid_learning_rates = grid_learning_rates;
  probe.grid_momenta = grid_momenta;
  probe.validate();
  if (warmstart_learning_epochs < 0) {
    throw ModelError("config: warmstart_learning_epochs must be nonnegative");
  }
}

std::string Leg::variant() const {
  return instance_kind.empty() ? "cap" + std::to_string(capacity) : instance_kind;
}

std::string Leg::group() const { return regime.label() + "/" + variant(); }

std::string Leg::name() const {
  std::string out = regime.label() + "_" + variant() + "_s" + std::to_string(seed);
  for (char& ch : out) {
    if (ch == ':' || ch == '/') ch = '-';
  }
  return out;
}

std::vector<Leg> expand_legs(const ExperimentConfig& config) {
  std::vector<Leg> legs;
  for (const auto& r : config.regimes) {
    const RegimeSpec spec = parse_regime_spec(r);
    auto add = [&](int capacity, const std::string& kind) {
      for (std::uint64_t seed : config.seeds) legs.push_back({spec, capacity, kind, seed});
    };
    if (config.problem == ProblemKind::scheduling) {
      for (const auto& k : config.instance_kinds) add(0, k);
    } else {
      for (int c : config.capacities) add(c, "");
    }
  }
  return legs;
}

std::uint64_t derive_seed(std::uint64_t seed, const std::string& purpose) {
  std::uint64_t z = seed ^ fnv1a(purpose);
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

LegData build_leg_data(const ExperimentConfig& config, const Leg& leg) {
  Dataset data = config.csv_path.empty()
                     ? synthesize(derive_seed(leg.seed, "data"), config.day_count,
                                  config.feature_count, config.noise_scale)
                     : ingest_csv(config.csv_path);
  const std::string id = leg.variant();
  switch (config.problem) {
    case ProblemKind::knapsack_unweighted: {
      OptInstance instance = make_knapsack_instance(id, unit_knapsack(kSlotsPerDay, leg.capacity));
      return {std::move(instance), split_dataset(data), std::nullopt};
    }
    case ProblemKind::knapsack_weighted: {
      if (data.item_weights.empty()) data = to_weighted_knapsack(data, derive_seed(leg.seed, "weights"));
      OptInstance instance = make_knapsack_instance(id, KnapsackData{data.item_weights, leg.capacity});
      return {std::move(instance), split_dataset(data), std::nullopt};
    }
    case ProblemKind::scheduling: {
      const std::uint64_t seed = config.instance_seed.value_or(derive_seed(leg.seed, "instance"));
      SchedulingInstance sched = generate_instance(parse_instance_kind(leg.instance_kind), seed);
      OptInstance instance = make_scheduling_instance(id, sched, kSlotsPerDay);
      return {std::move(instance), split_dataset(data), std::move(sched)};
    }
  }
  throw ModelError("unknown problem kind");
}

std::pair<LearningProblem, Standardizer> make_problem(LegData data) {
  const Standardizer st = standardize(data.split);
  return {LearningProblem{std::move(data.instance), std::move(data.split.train),
                          std::move(data.split.validation), std::move(data.split.test)},
          st};
}

std::string default_test_oracle(const ExperimentConfig& config, const Leg& leg) {
  if (!config.test_oracle.empty()) return config.test_oracle;
  if (config.problem != ProblemKind::scheduling) return "exact";
  return leg.instance_kind == "hard-like" ? "lp-relax" : "mip";
}

TrainConfig train_config(const ExperimentConfig& config, const Leg& leg) {
  const Family family = family_of(config.problem);
  TrainConfig c;
  c.regime = leg.regime.regime;
  std::string oracle = leg.regime.oracle;
  if (oracle.empty()) {
    oracle = !config.eval_oracle.empty() ? config.eval_oracle
             : family == Family::knapsack ? "exact"
                                          : "lp-relax";
  }
  c.oracle = parse_oracle(oracle, family);
  c.oracle.warmstart = parse_warmstart(config.solve_warmstart);
  c.oracle.node_limit = config.node_limit;
  OracleSpec test = parse_oracle(default_test_oracle(config, leg), family);
  test.node_limit = config.node_limit;
  c.test_oracle = test;
  c.test_stride = config.test_stride > 0 ? config.test_stride
                  : family == Family::knapsack ? 1
                                               : 2;
  c.learning_rate = config.learning_rate;
  c.momentum = config.momentum;
  c.max_epochs = config.max_epochs;
  c.seed = leg.seed;
  c.solver_time_budget_seconds = config.solver_time_budget_seconds;
  if (c.regime == Regime::spo) {
    c.warmstart_learning_epochs = config.warmstart_learning_epochs;
    c.pretrain_learning_rate = config.pretrain_learning_rate;
  }
  if (c.regime == Regime::mse_r) {
    c.grid_learning_rates = config.grid_learning_rates;
    c.grid_momenta = config.grid_momenta;
  }
  return c;
}

std::string config_digest(const ExperimentConfig& config, const Leg& leg) {
  const TrainConfig t = train_config(config, leg);
  std::ostringstream s;
  s << "problem " << to_string(config.problem) << "\nvariant " << leg.variant() << "\nregime "
    << leg.regime.label() << "\ninstance_seed "
    << (config.instance_seed ? std::to_string(*config.instance_seed) : "leg") << "\ncsv "
    << config.csv_path << "\ndays " << config.day_count << "\nfeatures " << config.feature_count
    << "\nnoise " << format_double(config.noise_scale) << "\noracle " << t.oracle.descriptor()
    << "\nwarmstart " << to_string(t.oracle.warmstart) << "\nnode_limit "
    << (config.node_limit ? std::to_string(*config.node_limit) : "none") << "\ntest "
    << t.test_oracle->descriptor() << "\nstride " << t.test_stride << "\nlr "
    << format_double(t.learning_rate) << "\nmomentum " << format_double(t.momentum)
    << "\nepochs " << t.max_epochs << "\nbudget "
    << (t.solver_time_budget_seconds ? format_double(*t.solver_time_budget_seconds) : "none")
    << "\npretrain " << t.warmstart_learning_epochs << " "
    << (t.pretrain_learning_rate ? format_double(*t.pretrain_learning_rate) : "lr")
    << "\ngrid " << join(t.grid_learning_rates) << ";" << join(t.grid_momenta) << "\n";
  return hex(fnv1a(s.str()));
}

LegOutcome run_leg(const ExperimentConfig& config, const Leg& leg) {
  namespace fs = std::filesystem;
  LegOutcome out;
  out.leg = leg;
  try {
    LegData data = build_leg_data(config, leg);
    const fs::path root(config.output_dir);
    fs::create_directories(root / "curves");
    fs::create_directories(root / "checkpoints");
    if (data.scheduling) {
      fs::create_directories(root / "instances");
      save_instance((root / "instances" / (leg.name() + ".txt")).string(), *data.scheduling);
    }
    auto [problem, standardizer] = make_problem(std::move(data));
    const TrainConfig tc = train_config(config, leg);
    LinearModel<double> start;
    start.weights = Eigen::VectorXd::Zero(problem.train.feature_count());
    TrainResult result = train(problem, std::move(start), tc);
    if (result.aborted) {
      throw TrainingError("training aborted: " + *result.aborted);
    }

    const std::string digest = config_digest(config, leg);
    result.curve.set_meta("leg", leg.name());
    result.curve.set_meta("group", leg.group());
    result.curve.set_meta("problem", to_string(config.problem));
    result.curve.set_meta("variant", leg.variant());
    result.curve.set_meta("config_digest", digest);

    Checkpoint cp;
    cp.model = tc.regime == Regime::mse_r ? result.best_model : result.final_model;
    cp.standardizer = standardizer;
    cp.metadata = {{"leg", leg.name()},
                   {"group", leg.group()},
                   {"problem", to_string(config.problem)},
                   {"variant", leg.variant()},
                   {"seed", std::to_string(leg.seed)},
                   {"config_digest", digest},
                   {"epoch", std::to_string(tc.regime == Regime::mse_r
                                                ? result.best_epoch
                                                : static_cast<int>(result.curve.points.size()))}};
    out.curve_path = (root / "curves" / (leg.name() + ".csv")).string();
    out.checkpoint_path = (root / "checkpoints" / (leg.name() + ".model")).string();
    save_curve(out.curve_path, result.curve);
    save_checkpoint(out.checkpoint_path, cp);
    out.result = std::move(result);
  } catch (const std::exception& e) {
    out.error = "leg " + leg.name() + ": " + e.what();
  }
  return out;
}

ExperimentOutcome run_experiment(const ExperimentConfig& config) {
  config.validate();
  const std::vector<Leg> legs = expand_legs(config);
  ExperimentOutcome outcome;
  outcome.legs.resize(legs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < legs.size(); i = next++) {
      outcome.legs[i] = run_leg(config, legs[i]);
    }
  };
  const int threads = std::min<int>(config.jobs, static_cast<int>(legs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::map<std::string, int> counts;
  std::vector<LearningCurve> curves;
  for (const LegOutcome& leg : outcome.legs) {
    if (leg.result) {
      ++counts[leg.leg.group()];
    } else {
      ++outcome.failed;
    }
  }
  for (const LegOutcome& leg : outcome.legs) {
    if (!leg.result) continue;
    if (counts[leg.leg.group()] >= 2) {
      curves.push_back(leg.result->curve);
    } else if (counts[leg.leg.group()] == 1) {
      outcome.notes.push_back("group " + leg.leg.group() +
                              " has a single finished run; left out of the report");
    }
  }
  if (!curves.empty()) {
    outcome.report = aggregate(curves, "group");
    const std::filesystem::path root(config.output_dir);
    std::filesystem::create_directories(root);
    std::ofstream report(root / "report.txt");
    write_report(report, *outcome.report);
    std::ofstream mean_curves(root / "mean_curves.csv");
    write_mean_curves(mean_curves, *outcome.report);
    if (!report || !mean_curves) throw Error("cannot write report files in " + config.output_dir);
  }
  return outcome;
}

}  // namespace dfl

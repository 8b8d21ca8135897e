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

// dfl: command-line front end for synthesizing data, training legs, running
// sweeps, evaluating checkpoints and aggregating curves.

#include "dfl/experiment.hpp"
#include "dfl/text.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace dfl;

// Config entries without a section belong to the subcommand being run.
class SubcommandConfig : public CLI::ConfigTOML {
 public:
  explicit SubcommandConfig(const CLI::App* app) : app_(app) {}

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    std::vector<CLI::ConfigItem> items = CLI::ConfigTOML::from_config(input);
    const auto selected = app_->get_subcommands();
    if (selected.empty()) return items;
    for (auto& item : items) {
      if (item.parents.empty()) item.parents = {selected.front()->get_name()};
    }
    return items;
  }

 private:
  const CLI::App* app_;
};

struct LegOptions {
  std::string problem = "knapsack-unweighted";
  std::string regime = "spo-relax";
  int capacity = 10;
  std::string instance_kind = "easy-10";
  std::uint64_t seed = 1;
  std::vector<std::string> regimes;
  std::vector<int> capacities;
  std::vector<std::string> instance_kinds;
  std::vector<std::uint64_t> seeds;
  std::optional<std::uint64_t> instance_seed;
  std::optional<double> budget;
  std::optional<double> pretrain_lr;
  std::optional<long> node_limit;
};

// Options shared by train, sweep and eval. `lists` selects the sweep form
// (regimes, capacities, instance-kinds, seeds) over the single-leg form.
void add_experiment_options(CLI::App* app, ExperimentConfig& c, LegOptions& o, bool lists) {
  app->add_option("--problem", o.problem,
                  "knapsack-unweighted, knapsack-weighted or scheduling")
      ->capture_default_str();
  if (lists) {
    app->add_option("--regimes", o.regimes, "Regimes: mse, mse-r, spo-<oracle>")->delimiter(',');
    app->add_option("--capacities", o.capacities, "Knapsack capacities")->delimiter(',');
    app->add_option("--instance-kinds", o.instance_kinds,
                    "Scheduling instances: easy-10, easy-15, easy-20, hard-like")
        ->delimiter(',');
    app->add_option("--seeds", o.seeds, "One leg per seed")->delimiter(',');
  } else {
    app->add_option("--regime", o.regime, "mse, mse-r or spo-<oracle>")->capture_default_str();
    app->add_option("--capacity", o.capacity, "Knapsack capacity")->capture_default_str();
    app->add_option("--instance-kind", o.instance_kind, "Scheduling instance kind")
        ->capture_default_str();
    app->add_option("--seed", o.seed, "Seed of the leg")->capture_default_str();
  }
  app->add_option("--instance-seed", o.instance_seed, "Fixed scheduling instance seed");
  app->add_option("--csv", c.csv_path, "Price CSV; synthetic data when absent");
  app->add_option("--days", c.day_count, "Synthetic day count")->capture_default_str();
  app->add_option("--features", c.feature_count, "Synthetic feature count")->capture_default_str();
  app->add_option("--noise", c.noise_scale, "Synthetic noise scale")->capture_default_str();
  app->add_option("--learning-rate", c.learning_rate)->capture_default_str();
  app->add_option("--momentum", c.momentum)->capture_default_str();
  app->add_option("--epochs", c.max_epochs)->capture_default_str();
  app->add_option("--budget", o.budget, "Training solver-time budget in seconds");
  app->add_option("--pretrain-epochs", c.warmstart_learning_epochs,
                  "MSE epochs before SPO training")
      ->capture_default_str();
  app->add_option("--pretrain-learning-rate", o.pretrain_lr);
  app->add_option("--solve-warmstart", c.solve_warmstart, "none, basis, incumbent or bound")
      ->capture_default_str();
  app->add_option("--node-limit", o.node_limit, "Branch-and-bound node limit");
  app->add_option("--test-stride", c.test_stride, "Epochs between test evaluations; 0 for default")
      ->capture_default_str();
  app->add_option("--eval-oracle", c.eval_oracle, "Validation oracle of mse and mse-r");
  app->add_option("--test-oracle", c.test_oracle, "Test oracle");
  app->add_option("--grid-learning-rates", c.grid_learning_rates)->delimiter(',');
  app->add_option("--grid-momenta", c.grid_momenta)->delimiter(',');
  app->add_option("--output-dir", c.output_dir, "Overrides DFL_OUTPUT_DIR")->capture_default_str();
  app->add_option("--jobs", c.jobs, "Parallel legs; overrides DFL_JOBS")->capture_default_str();
}

bool on_command_line(int argc, char** argv, const std::string& flag) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == flag || arg.rfind(flag + "=", 0) == 0) return true;
  }
  return false;
}

// Environment settings override the config file; flags override both.
void apply_environment(ExperimentConfig& c, int argc, char** argv) {
  if (const char* dir = std::getenv("DFL_OUTPUT_DIR"); dir && *dir &&
                                                       !on_command_line(argc, argv, "--output-dir")) {
    c.output_dir = dir;
  }
  if (const char* jobs = std::getenv("DFL_JOBS"); jobs && *jobs &&
                                                  !on_command_line(argc, argv, "--jobs")) {
    c.jobs = static_cast<int>(parse_long(jobs, "DFL_JOBS"));
  }
}

void resolve(ExperimentConfig& c, const LegOptions& o, bool lists) {
  c.problem = parse_problem_kind(o.problem);
  if (lists) {
    if (!o.regimes.empty()) c.regimes = o.regimes;
    if (!o.capacities.empty()) c.capacities = o.capacities;
    if (!o.instance_kinds.empty()) c.instance_kinds = o.instance_kinds;
    if (!o.seeds.empty()) c.seeds = o.seeds;
  } else {
    c.regimes = {o.regime};
    c.capacities = {o.capacity};
    c.instance_kinds = {o.instance_kind};
    c.seeds = {o.seed};
  }
  c.instance_seed = o.instance_seed;
  c.solver_time_budget_seconds = o.budget;
  c.pretrain_learning_rate = o.pretrain_lr;
  c.node_limit = o.node_limit;
  c.validate();
}

void print_leg(const LegOutcome& leg) {
  if (!leg.result) {
    std::cerr << "error: " << leg.error << "\n";
    return;
  }
  const TrainResult& r = *leg.result;
  std::cout << leg.leg.name() << ": epochs " << r.curve.points.size() << ", best epoch "
            << r.best_epoch << ", reported test regret "
            << r.curve.meta("reported_test_regret") << ", training solver s "
            << format_double(r.training_solver_seconds)
            << (r.budget_exhausted ? " (budget exhausted)" : "") << "\n";
  for (const auto& w : r.warnings) std::cerr << "warning: " << leg.leg.name() << ": " << w << "\n";
}

int run_sweep(const ExperimentConfig& c) {
  const ExperimentOutcome out = run_experiment(c);
  for (const auto& leg : out.legs) print_leg(leg);
  for (const auto& note : out.notes) std::cerr << "note: " << note << "\n";
  if (out.report) {
    write_report(std::cout, *out.report);
    std::cout << "wrote " << (std::filesystem::path(c.output_dir) / "report.txt").string() << "\n";
  }
  return out.failed == 0 ? 0 : 1;
}

std::vector<std::string> curve_files(const std::vector<std::string>& inputs) {
  std::vector<std::string> files;
  for (const auto& in : inputs) {
    if (std::filesystem::is_directory(in)) {
      std::vector<std::string> found;
      for (const auto& entry : std::filesystem::directory_iterator(in)) {
        if (entry.path().extension() == ".csv") found.push_back(entry.path().string());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(in);
    }
  }
  return files;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decision-focused learning experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Plain-text file of key = value settings");
  app.config_formatter(std::make_shared<SubcommandConfig>(&app));

  ExperimentConfig config;
  LegOptions legs;

  auto* synth = app.add_subcommand("synth", "Write a synthetic price CSV");
  std::uint64_t synth_seed = 1;
  bool weighted = false;
  std::string synth_out;
  synth->add_option("--seed", synth_seed)->capture_default_str();
  synth->add_option("--days", config.day_count)->capture_default_str();
  synth->add_option("--features", config.feature_count)->capture_default_str();
  synth->add_option("--noise", config.noise_scale)->capture_default_str();
  synth->add_flag("--weighted", weighted, "Apply the weighted-knapsack value transform");
  synth->add_option("--out", synth_out, "Output path; stdout when absent");

  auto* train_cmd = app.add_subcommand("train", "Run one leg");
  add_experiment_options(train_cmd, config, legs, false);

  auto* sweep = app.add_subcommand("sweep", "Run every leg of a configuration");
  add_experiment_options(sweep, config, legs, true);

  auto* eval = app.add_subcommand("eval", "Regret of a checkpoint on a split");
  add_experiment_options(eval, config, legs, false);
  std::string checkpoint_path;
  std::string split_name = "test";
  std::string eval_with;
  eval->add_option("--checkpoint", checkpoint_path)->required();
  eval->add_option("--split", split_name, "train, validation or test")
      ->check(CLI::IsMember({"train", "validation", "test"}))
      ->capture_default_str();
  eval->add_option("--oracle", eval_with, "Evaluation oracle; the test oracle when absent");

  auto* report = app.add_subcommand("report", "Aggregate curve files");
  std::vector<std::string> report_inputs;
  std::string group_key = "group";
  std::string report_out;
  report->add_option("inputs", report_inputs, "Curve files or directories")->required();
  report->add_option("--group-key", group_key, "Curve metadata key to group by")
      ->capture_default_str();
  report->add_option("--mean-curves", report_out, "Also write per-group mean curves here");

  CLI11_PARSE(app, argc, argv);

  try {
    apply_environment(config, argc, argv);
    if (*synth) {
      Dataset d = synthesize(synth_seed, config.day_count, config.feature_count, config.noise_scale);
      if (weighted) d = to_weighted_knapsack(d, derive_seed(synth_seed, "weights"));
      if (synth_out.empty()) {
        write_csv(std::cout, d);
      } else {
        write_csv(synth_out, d);
      }
      return 0;
    }
    if (*train_cmd) {
      resolve(config, legs, false);
      return run_sweep(config);
    }
    if (*sweep) {
      resolve(config, legs, true);
      return run_sweep(config);
    }
    if (*eval) {
      resolve(config, legs, false);
      const Leg leg = expand_legs(config).front();
      LegData data = build_leg_data(config, leg);
      const Checkpoint cp = load_checkpoint(checkpoint_path);
      Dataset& split = split_name == "train"        ? data.split.train
                       : split_name == "validation" ? data.split.validation
                                                    : data.split.test;
      for (Day& day : split.days) day.features = cp.standardizer.apply(day.features);
      const Family family = data.instance.family();
      Oracle oracle(data.instance,
                    parse_oracle(eval_with.empty() ? default_test_oracle(config, leg) : eval_with,
                                 family));
      const SplitRegret r = evaluate_split(cp.model, split, data.instance, oracle);
      std::cout << split_name << " regret " << format_double(r.total) << " over "
                << r.per_instance.size() << " days with " << r.eval_oracle << "\n";
      if (r.partial()) {
        std::cerr << "warning: " << r.failed.size() << " solves failed; regret is partial\n";
        return 1;
      }
      return 0;
    }
    if (*report) {
      std::vector<LearningCurve> curves;
      for (const auto& f : curve_files(report_inputs)) curves.push_back(load_curve(f));
      const AggregateReport rep = aggregate(curves, group_key);
      write_report(std::cout, rep);
      if (!report_out.empty()) {
        std::ofstream out(report_out);
        write_mean_curves(out, rep);
        if (!out) throw Error("cannot write " + report_out);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

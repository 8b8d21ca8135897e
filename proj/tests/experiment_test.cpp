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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace dfl {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("dfl_experiment_test_" + name);
  fs::remove_all(dir);
  return dir;
}

ExperimentConfig small_config(const fs::path& out) {
  ExperimentConfig c;
  c.regimes = {"mse-r", "spo-relax"};
  c.capacities = {10};
  c.seeds = {1, 2, 3};
  c.day_count = 30;
  c.max_epochs = 3;
  c.grid_learning_rates = {1e-3, 1e-2};
  c.grid_momenta = {0.9};
  c.output_dir = out.string();
  return c;
}

// Curve text with the two timing columns blanked.
std::string without_wall_clock(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#' && line.rfind("epoch,", 0) != 0) {
      auto f = split(line, ',');
      f[1] = "-";
      f[2] = "-";
      line.clear();
      for (std::size_t i = 0; i < f.size(); ++i) line += (i ? "," : "") + f[i];
    }
    out << line << "\n";
  }
  return out.str();
}

TEST(Experiment, WritesOneCurvePerLegAndAReport) {
  const fs::path out = scratch("count");
  const ExperimentOutcome r = run_experiment(small_config(out));
  EXPECT_EQ(r.failed, 0);
  ASSERT_EQ(r.legs.size(), 6u);
  int curves = 0;
  for (const auto& e : fs::directory_iterator(out / "curves")) curves += e.path().extension() == ".csv";
  EXPECT_EQ(curves, 6);
  EXPECT_TRUE(fs::exists(out / "report.txt"));
  EXPECT_TRUE(fs::exists(out / "mean_curves.csv"));
  ASSERT_TRUE(r.report.has_value());
  ASSERT_EQ(r.report->rows.size(), 2u);
  EXPECT_NE(r.report->find("spo-relax/cap10"), nullptr);
  EXPECT_EQ(r.report->find("mse-r/cap10")->seeds.size(), 3u);
  fs::remove_all(out);
}

TEST(Experiment, RerunIsIdenticalApartFromWallClock) {
  const fs::path a = scratch("rerun_a");
  const fs::path b = scratch("rerun_b");
  ExperimentConfig c = small_config(a);
  run_experiment(c);
  c.output_dir = b.string();
  c.jobs = 3;
  run_experiment(c);
  for (const auto& e : fs::directory_iterator(a / "curves")) {
    const fs::path other = b / "curves" / e.path().filename();
    EXPECT_EQ(without_wall_clock(e.path().string()), without_wall_clock(other.string()))
        << e.path().filename();
  }
  for (const auto& e : fs::directory_iterator(a / "checkpoints")) {
    EXPECT_EQ(load_checkpoint(e.path().string()),
              load_checkpoint((b / "checkpoints" / e.path().filename()).string()));
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Experiment, CheckpointReproducesReportedRegret) {
  const fs::path out = scratch("checkpoint");
  ExperimentConfig c = small_config(out);
  c.seeds = {4};
  const ExperimentOutcome r = run_experiment(c);
  for (const LegOutcome& leg : r.legs) {
    ASSERT_TRUE(leg.result.has_value()) << leg.error;
    const Checkpoint cp = load_checkpoint(leg.checkpoint_path);
    LegData data = build_leg_data(c, leg.leg);
    for (Day& day : data.split.test.days) day.features = cp.standardizer.apply(day.features);
    Oracle oracle(data.instance, parse_oracle("exact", Family::knapsack));
    const SplitRegret regret = evaluate_split(cp.model, data.split.test, data.instance, oracle);
    const LearningCurve curve = load_curve(leg.curve_path);
    EXPECT_NEAR(regret.total, parse_double(curve.meta("reported_test_regret"), "curve"),
                1e-9 * (1.0 + regret.total));
  }
  EXPECT_FALSE(r.report.has_value());
  EXPECT_EQ(r.notes.size(), 2u);
  fs::remove_all(out);
}

TEST(Experiment, DigestIgnoresSeedOnly) {
  const ExperimentConfig c = small_config("unused");
  const std::vector<Leg> legs = expand_legs(c);
  EXPECT_EQ(config_digest(c, legs[0]), config_digest(c, legs[1]));
  EXPECT_NE(config_digest(c, legs[0]), config_digest(c, legs[3]));
  ExperimentConfig other = c;
  other.learning_rate = 0.02;
  EXPECT_NE(config_digest(c, legs[0]), config_digest(other, legs[0]));
  other = c;
  other.output_dir = "elsewhere";
  other.jobs = 4;
  EXPECT_EQ(config_digest(c, legs[0]), config_digest(other, legs[0]));
}

TEST(Experiment, FailedLegIsNamedAndCounted) {
  const fs::path out = scratch("failed");
  ExperimentConfig c = small_config(out);
  c.csv_path = (out / "missing.csv").string();
  c.seeds = {1};
  const ExperimentOutcome r = run_experiment(c);
  EXPECT_EQ(r.failed, 2);
  EXPECT_NE(r.legs[0].error.find("leg mse-r_cap10_s1"), std::string::npos);
  fs::remove_all(out);
}

TEST(Experiment, SchedulingLegSavesItsInstance) {
  const fs::path out = scratch("scheduling");
  ExperimentConfig c;
  c.problem = ProblemKind::scheduling;
  c.instance_kinds = {"easy-10"};
  c.instance_seed = 5;
  c.regimes = {"spo-relax"};
  c.seeds = {1};
  c.day_count = 20;
  c.max_epochs = 2;
  c.solve_warmstart = "basis";
  c.output_dir = out.string();
  const ExperimentOutcome r = run_experiment(c);
  ASSERT_EQ(r.failed, 0) << r.legs[0].error;
  const SchedulingInstance saved =
      load_instance((out / "instances" / "spo-relax_easy-10_s1.txt").string());
  EXPECT_EQ(saved, generate_instance(InstanceKind::easy10, 5));
  const LearningCurve curve = load_curve(r.legs[0].curve_path);
  EXPECT_EQ(curve.meta("solve_warmstart"), "basis");
  EXPECT_EQ(curve.meta("test_oracle"), "mip");
  EXPECT_EQ(curve.points.size(), 2u);
  fs::remove_all(out);
}

TEST(Experiment, WeightedLegsUseSlotWeights) {
  ExperimentConfig c = small_config("unused");
  c.problem = ProblemKind::knapsack_weighted;
  c.capacities = {60};
  const Leg leg = expand_legs(c).front();
  const LegData data = build_leg_data(c, leg);
  EXPECT_EQ(data.instance.knapsack().capacity, 60);
  EXPECT_EQ(data.instance.knapsack().weights, data.split.train.item_weights);
  for (int w : data.instance.knapsack().weights) EXPECT_TRUE(w == 3 || w == 5 || w == 7);
}

TEST(Experiment, TrainConfigDefaults) {
  ExperimentConfig c = small_config("unused");
  const std::vector<Leg> legs = expand_legs(c);
  const TrainConfig mse_r = train_config(c, legs[0]);
  EXPECT_EQ(mse_r.regime, Regime::mse_r);
  EXPECT_EQ(mse_r.oracle.descriptor(), "knap-exact");
  EXPECT_EQ(mse_r.grid_learning_rates.size(), 2u);
  const TrainConfig spo = train_config(c, legs[3]);
  EXPECT_EQ(spo.oracle.descriptor(), "knap-relax");
  EXPECT_EQ(spo.test_oracle->descriptor(), "knap-exact");
  EXPECT_EQ(spo.test_stride, 1);
  EXPECT_EQ(spo.seed, legs[3].seed);
  c.problem = ProblemKind::scheduling;
  c.instance_kinds = {"hard-like"};
  const Leg hard = expand_legs(c).back();
  EXPECT_EQ(train_config(c, hard).test_oracle->descriptor(), "lp-relax");
  EXPECT_EQ(train_config(c, hard).test_stride, 2);
}

TEST(Experiment, ConfigValidation) {
  ExperimentConfig c = small_config("unused");
  c.problem = ProblemKind::scheduling;
  c.regimes = {"spo-greedy"};
  EXPECT_THROW(c.validate(), ModelError);
  c = small_config("unused");
  c.regimes = {"sgd"};
  EXPECT_THROW(c.validate(), ModelError);
  c = small_config("unused");
  c.seeds.clear();
  EXPECT_THROW(c.validate(), ModelError);
  c = small_config("unused");
  c.day_count = 5;
  EXPECT_THROW(c.validate(), ModelError);
  c = small_config("unused");
  c.solve_warmstart = "hot";
  EXPECT_THROW(c.validate(), ModelError);
  c = small_config("unused");
  c.momentum = 1.0;
  EXPECT_THROW(c.validate(), ModelError);
  EXPECT_NO_THROW(small_config("unused").validate());
}

TEST(Experiment, RegimeLabels) {
  EXPECT_EQ(parse_regime_spec("spo-mip-gap:0.1").oracle, "mip-gap:0.1");
  EXPECT_EQ(parse_regime_spec("mse-r").label(), "mse-r");
  EXPECT_EQ(parse_problem_kind(to_string(ProblemKind::knapsack_weighted)),
            ProblemKind::knapsack_weighted);
  Leg leg{parse_regime_spec("spo-mip-gap:0.1"), 0, "easy-15", 7};
  EXPECT_EQ(leg.name(), "spo-mip-gap-0.1_easy-15_s7");
  EXPECT_EQ(leg.group(), "spo-mip-gap:0.1/easy-15");
}

TEST(Experiment, DerivedSeedsDiffer) {
  EXPECT_NE(derive_seed(1, "data"), derive_seed(1, "weights"));
  EXPECT_NE(derive_seed(1, "data"), derive_seed(2, "data"));
  EXPECT_EQ(derive_seed(1, "data"), derive_seed(1, "data"));
}

}  // namespace
}  // namespace dfl

// Copyright 2026 The lqt-bench Authors
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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "lqt/experiment.hpp"
#include "lqt/fixtures.hpp"
#include "lqt/io.hpp"

namespace fs = std::filesystem;

namespace lqt {
namespace {

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("lqt_test_" + std::string(::testing::UnitTest::GetInstance()
                                          ->current_test_info()
                                          ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST(Fixtures, HashIsPinned) {
  // Any edit to a numeric fixture must be deliberate and update this value.
  EXPECT_EQ(fixtures::fixture_hash(), 0x8ec040cd9454eeceull);
}

TEST(Fixtures, ShapesAndWeights) {
  const StateSpaceModel model = fixtures::extruder_model();
  EXPECT_EQ(model.n(), 6);
  EXPECT_EQ(model.m(), 7);
  EXPECT_EQ(model.p(), 5);
  EXPECT_EQ(fixtures::extruder_reference().r0,
            (Vector(5) << 150, 160, 170, 175, 180).finished());
  const CostWeights obs = fixtures::observer_tuned_weights();
  EXPECT_TRUE(obs.Q.isDiagonal());
  EXPECT_GE(obs.Q.diagonal().minCoeff(), 0.01);
  EXPECT_LE(obs.Q.diagonal().maxCoeff(), 1.0);
  EXPECT_LE(obs.R.diagonal().maxCoeff(), 0.4);
  const CostWeights dd = fixtures::datadriven_tuned_weights();
  EXPECT_GT(dd.Q.diagonal().minCoeff(), 0.0);
  EXPECT_GT(dd.R.diagonal().minCoeff(), 0.0);
  EXPECT_EQ(fixtures::Reported::observer_y().size(), 5);
}

TEST(Experiment, PipelineNames) {
  EXPECT_EQ(parse_pipeline("model-based"), Pipeline::kObserver);
  EXPECT_EQ(parse_pipeline("observer"), Pipeline::kObserver);
  EXPECT_EQ(parse_pipeline("data-driven"), Pipeline::kDataDriven);
  EXPECT_THROW(parse_pipeline("magic"), Error);
  EXPECT_EQ(to_string(Pipeline::kDataDriven), "data-driven");
}

TEST(Experiment, ConfigDefaultsAndOverrides) {
  const ExperimentConfig def = config_from_json("{}");
  EXPECT_EQ(def.steps, 1000u);
  EXPECT_EQ(def.seed, 1u);
  EXPECT_EQ(def.weights().Q, Matrix::Identity(5, 5));
  EXPECT_DOUBLE_EQ(def.gamma(), 0.99);

  const ExperimentConfig cfg = config_from_json(R"({
    "name": "x", "pipeline": "data-driven", "steps": 200, "seed": 9,
    "weights": {"Q": [1, 2, 3, 4, 5], "R": [1, 1, 1, 1, 1, 1, 2]},
    "data_driven": {"N": 7, "samples": 5000},
    "tune": {"enabled": true, "init": 3, "iters": 4}
  })");
  EXPECT_EQ(cfg.name, "x");
  EXPECT_EQ(cfg.pipeline, Pipeline::kDataDriven);
  EXPECT_EQ(cfg.steps, 200u);
  EXPECT_EQ(cfg.seed, 9u);
  EXPECT_EQ(cfg.weights().Q(4, 4), 5.0);
  EXPECT_EQ(cfg.weights().R(6, 6), 2.0);
  EXPECT_EQ(cfg.data_driven.N, 7);
  EXPECT_EQ(cfg.data_driven.samples, 5000u);
  EXPECT_TRUE(cfg.tune.enabled);
  EXPECT_EQ(cfg.tune.acquisition.init_samples, 3);

  const ExperimentConfig tuned = config_from_json(R"({"weights": "observer-tuned"})");
  EXPECT_EQ(tuned.weights().Q, fixtures::observer_tuned_weights().Q);
  EXPECT_THROW(config_from_json("{not json"), Error);
}

TEST(Experiment, StageTagging) {
  try {
    in_stage("train", [] { throw Error(ErrorKind::kSingular, "bad"); });
    FAIL();
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "train");
    EXPECT_EQ(e.kind(), ErrorKind::kSingular);
  }
}

TEST(Experiment, CompareRuns) {
  Summary a, b;
  a.perf_index_1000 = 200.0;
  b.perf_index_1000 = 50.0;
  a.tracking_error_l2 = 1.0;
  b.tracking_error_l2 = 0.5;
  const Reduction red = compare_runs(a, b);
  EXPECT_DOUBLE_EQ(red.perf_index_1000, 75.0);
  EXPECT_DOUBLE_EQ(red.tracking_error, 50.0);
}

TEST(Experiment, SummaryJsonRoundTrip) {
  Summary s;
  s.name = "n";
  s.pipeline = "observer";
  s.final_outputs = (Vector(2) << 1.5, 1.0 / 3.0).finished();
  s.tracking_error_l2 = 0.1;
  s.perf_index_100 = 12.25;
  s.perf_index_1000 = 13.5;
  s.seed = 4;
  s.iterations = 7;
  s.q = Vector::Ones(2);
  s.r = Vector::Ones(3);
  s.estimation_error_100 = 2.5;
  const Summary back = summary_from_json(summary_to_json(s));
  EXPECT_EQ(back.final_outputs, s.final_outputs);
  EXPECT_EQ(back.perf_index_1000, s.perf_index_1000);
  EXPECT_EQ(back.iterations, 7);
  EXPECT_EQ(back.estimation_error_100, s.estimation_error_100);
  EXPECT_FALSE(back.excitation_rank.has_value());
}

TEST(Experiment, ObserverPipelineIsDeterministic) {
  const ExperimentReport a =
      run_observer_pipeline(fixtures::extruder_model(), fixtures::extruder_reference(),
                            fixtures::identity_weights(), {}, 1, 300);
  const ExperimentReport b =
      run_observer_pipeline(fixtures::extruder_model(), fixtures::extruder_reference(),
                            fixtures::identity_weights(), {}, 1, 300);
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t t = 0; t < a.trace.size(); ++t) {
    ASSERT_EQ(a.trace.records()[t].y, b.trace.records()[t].y);
    ASSERT_EQ(a.trace.records()[t].u, b.trace.records()[t].u);
  }
  EXPECT_EQ(a.summary.perf_index_100, b.summary.perf_index_100);
}

TEST(Experiment, WeightsFromTheta) {
  const Vector theta = Vector::LinSpaced(12, 0.1, 1.2);
  const CostWeights w = weights_from_theta(theta, 5, 0.9);
  EXPECT_EQ(w.Q.diagonal(), theta.head(5));
  EXPECT_EQ(w.R.diagonal(), theta.tail(7));
  EXPECT_EQ(w.gamma, 0.9);
}

TEST_F(TempDir, DatasetRoundTrip) {
  const StateSpaceModel model = fixtures::extruder_model();
  const ReferenceGenerator gen = fixtures::extruder_reference();
  const ProbingNoiseConfig noise;
  const Vector x0 = Vector::Constant(6, 50.0);
  const IoDataset data =
      generate_dataset(model, fixtures::data_gain(), noise, gen, 50, x0);
  const fs::path path = dir_ / "data.csv";
  io::write_dataset(path, data, {3, fixtures::model_hash(model), noise, x0, gen.r0, gen.F});
  const IoDataset back = io::read_dataset(path);
  EXPECT_EQ(back.u, data.u);
  EXPECT_EQ(back.y, data.y);
  EXPECT_EQ(back.r, data.r);
  const io::DatasetMeta meta = io::read_dataset_meta(path);
  EXPECT_EQ(meta.seed, 3u);
  EXPECT_EQ(meta.model_hash, fixtures::model_hash(model));
}

TEST_F(TempDir, KernelAndWeightsRoundTrip) {
  Matrix H = Matrix::Random(6, 6);
  H = (H + H.transpose()).eval();
  const KernelMatrix k{H, BlockLayout{2, 1, 1}};
  io::write_kernel(dir_ / "k.csv", k);
  const KernelMatrix back = io::read_kernel(dir_ / "k.csv");
  EXPECT_EQ(back.H, H);
  EXPECT_EQ(back.layout.N, 2);

  const CostWeights w = fixtures::observer_tuned_weights(0.95);
  io::write_weights(dir_ / "w.json", w);
  const CostWeights wb = io::read_weights(dir_ / "w.json");
  EXPECT_EQ(wb.Q, w.Q);
  EXPECT_EQ(wb.R, w.R);
  EXPECT_EQ(wb.gamma, 0.95);
}

TEST_F(TempDir, MalformedInputsReportIoErrors) {
  { std::ofstream(dir_ / "bad.json") << "[1, 2"; }
  EXPECT_THROW(io::read_weights(dir_ / "bad.json"), Error);
  EXPECT_THROW(io::read_text(dir_ / "missing.json"), Error);
  { std::ofstream(dir_ / "k.csv") << "1,2\n3,4\n"; }
  EXPECT_THROW(io::read_kernel(dir_ / "k.csv"), Error);
}

TEST_F(TempDir, ReportFilesWritten) {
  ExperimentConfig cfg;
  cfg.steps = 120;
  const ExperimentReport rep = run_experiment(cfg);
  write_report(rep, dir_ / "out");
  EXPECT_TRUE(fs::exists(dir_ / "out" / "trace.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "summary.json"));
  const Summary s = summary_from_json(io::read_text(dir_ / "out" / "summary.json"));
  EXPECT_EQ(s.perf_index_100, rep.summary.perf_index_100);
  EXPECT_TRUE(s.estimation_error_100.has_value());
}

}  // namespace
}  // namespace lqt

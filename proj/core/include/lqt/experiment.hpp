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

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>

#include "lqt/bayesopt.hpp"
#include "lqt/data_driven.hpp"
#include "lqt/datagen.hpp"
#include "lqt/fixtures.hpp"
#include "lqt/model_based.hpp"

namespace lqt {

/// Error annotated with the pipeline stage that raised it.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(cause.kind(), cause.what()), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// Runs `f`, rethrowing any lqt::Error as a StageError tagged `stage`.
template <class F>
auto in_stage(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(stage, e);
  }
}

enum class Pipeline { kObserver, kDataDriven };

std::string_view to_string(Pipeline p);
Pipeline parse_pipeline(std::string_view name);

struct TuneConfig {
  bool enabled = false;
  /// "observer", "datadriven" or a path to a bounds JSON file; empty picks
  /// the preset matching the pipeline.
  std::string bounds;
  AcquisitionConfig acquisition;
  std::size_t horizon = 100;  ///< fitness horizon
};

/// Every field has a default; the defaults reproduce the baseline runs.
struct ExperimentConfig {
  std::string name = "experiment";
  Pipeline pipeline = Pipeline::kObserver;
  std::optional<std::filesystem::path> model_file;
  std::optional<Vector> reference;
  /// Diagonal or full weights; identity when empty.
  std::optional<Matrix> Q;
  std::optional<Matrix> R;
  std::size_t steps = 1000;
  std::uint64_t seed = 1;
  fixtures::ObserverParams observer;
  fixtures::DataDrivenParams data_driven;
  ProbingNoiseConfig noise;
  TuneConfig tune;

  StateSpaceModel model() const;
  ReferenceGenerator reference_generator() const;
  double gamma() const;
  CostWeights weights() const;
};

/// Parses a JSON config; absent keys keep their defaults.
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

struct Summary {
  std::string name;
  std::string pipeline;
  Vector final_outputs;  ///< y(100), or y(steps) for shorter runs
  double tracking_error_l2 = 0.0;
  double perf_index_100 = 0.0;
  double perf_index_1000 = 0.0;
  double wall_time = 0.0;
  std::uint64_t seed = 0;
  int iterations = 0;
  bool converged = true;
  Vector q;  ///< diagonal of Q used by the final run
  Vector r;  ///< diagonal of R used by the final run
  std::optional<double> estimation_error_100;
  std::optional<double> output_estimation_error_100;
  std::optional<Eigen::Index> excitation_rank;
};

std::string summary_to_json(const Summary& s);
Summary summary_from_json(const std::string& text);

struct ExperimentReport {
  Summary summary;
  SimulationTrace trace{0.99};
  std::optional<LqtSolution> solution;
  std::optional<KernelMatrix> kernel;
  std::optional<BoResult> tuning;
};

/// Fills the summary fields derived from a trace (outputs at t = 100,
/// tracking error, 100- and 1000-step indices).
void summarize_trace(const SimulationTrace& trace, const CostWeights& w,
                     const ReferenceGenerator& gen, Summary& s);

/// Observer pipeline: random K0 from `seed`, gain iteration, closed loop.
ExperimentReport run_observer_pipeline(const StateSpaceModel& model,
                                       const ReferenceGenerator& gen,
                                       const CostWeights& w,
                                       const fixtures::ObserverParams& params,
                                       std::uint64_t seed, std::size_t steps);

/// Data-driven pipeline pieces: one dataset and factorization shared by any
/// number of trainings with different weights.
class DataDrivenSetup {
 public:
  DataDrivenSetup(const StateSpaceModel& model, const ReferenceGenerator& gen,
                  const fixtures::DataDrivenParams& params,
                  const ProbingNoiseConfig& noise);

  const IoDataset& dataset() const { return data_; }
  const NormalEquations& equations() const { return eqs_; }

  TrainingResult train(const CostWeights& w) const;
  SimulationTrace run(const KernelMatrix& kernel, const CostWeights& w,
                      std::size_t steps) const;
  ExperimentReport run_pipeline(const CostWeights& w, std::size_t steps) const;

 private:
  StateSpaceModel model_;
  ReferenceGenerator gen_;
  fixtures::DataDrivenParams params_;
  IoDataset data_;
  NormalEquations eqs_;
};

/// Diagonal weights from theta = {q_1..q_p, r_1..r_m}.
CostWeights weights_from_theta(const Vector& theta, Eigen::Index p,
                               double gamma);

FitnessEvaluator observer_evaluator(const StateSpaceModel& model,
                                    const ReferenceGenerator& gen,
                                    const fixtures::ObserverParams& params,
                                    std::uint64_t seed, std::size_t horizon);
FitnessEvaluator datadriven_evaluator(const DataDrivenSetup& setup,
                                      double gamma, std::size_t horizon);

SearchDomain resolve_bounds(const ExperimentConfig& cfg);

/// Full experiment: optional tuning, then the final run under the selected
/// or tuned weights. Errors surface as StageError.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Writes trace.csv and summary.json, plus kernel.csv, bo_history.csv and
/// best_theta.json when present.
void write_report(const ExperimentReport& report,
                  const std::filesystem::path& dir);

struct Reduction {
  double perf_index_1000 = 0.0;   ///< (1 - b/a) * 100
  double tracking_error = 0.0;    ///< (1 - b/a) * 100
};

Reduction compare_runs(const Summary& a, const Summary& b);

}  // namespace lqt

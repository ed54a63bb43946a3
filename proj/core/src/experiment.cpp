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

#include "lqt/experiment.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "json_matrix.hpp"
#include "lqt/io.hpp"

namespace lqt {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

Vector reference_at(const ReferenceGenerator& gen, std::size_t t) {
  Vector r = gen.r0;
  for (std::size_t k = 0; k < t; ++k) r = reference_step(gen, r);
  return r;
}

template <class T>
void read_opt(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

std::string_view to_string(Pipeline p) {
  return p == Pipeline::kObserver ? "observer" : "data-driven";
}

Pipeline parse_pipeline(std::string_view name) {
  if (name == "observer" || name == "model-based") return Pipeline::kObserver;
  if (name == "data-driven" || name == "datadriven") return Pipeline::kDataDriven;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown pipeline '" + std::string(name) +
                  "' (expected model-based or data-driven)");
}

StateSpaceModel ExperimentConfig::model() const {
  return model_file ? io::read_model(*model_file) : fixtures::extruder_model();
}

ReferenceGenerator ExperimentConfig::reference_generator() const {
  return reference ? ReferenceGenerator::constant(*reference)
                   : fixtures::extruder_reference();
}

double ExperimentConfig::gamma() const {
  return pipeline == Pipeline::kObserver ? observer.gamma : data_driven.gamma;
}

CostWeights ExperimentConfig::weights() const {
  const StateSpaceModel sys = model();
  const Matrix q = Q ? *Q : Matrix::Identity(sys.p(), sys.p());
  const Matrix r = R ? *R : Matrix::Identity(sys.m(), sys.m());
  return CostWeights(q, r, gamma());
}

ExperimentConfig config_from_json(const std::string& text) {
  ExperimentConfig cfg;
  try {
    const json j = json::parse(text);
    read_opt(j, "name", cfg.name);
    if (j.contains("pipeline")) {
      cfg.pipeline = parse_pipeline(j.at("pipeline").get<std::string>());
    }
    if (j.contains("model")) {
      const auto model = j.at("model").get<std::string>();
      if (model != "extruder") cfg.model_file = model;
    }
    if (j.contains("reference")) {
      cfg.reference = detail::vector_from_json(j.at("reference"));
    }
    if (j.contains("weights")) {
      const json& w = j.at("weights");
      if (w.is_string()) {
        const auto name = w.get<std::string>();
        if (name == "observer-tuned") {
          const CostWeights t = fixtures::observer_tuned_weights();
          cfg.Q = t.Q;
          cfg.R = t.R;
        } else if (name == "datadriven-tuned") {
          const CostWeights t = fixtures::datadriven_tuned_weights();
          cfg.Q = t.Q;
          cfg.R = t.R;
        } else if (name != "identity") {
          const CostWeights t = io::read_weights(name);
          cfg.Q = t.Q;
          cfg.R = t.R;
        }
      } else {
        cfg.Q = detail::weight_from_json(w.at("Q"));
        cfg.R = detail::weight_from_json(w.at("R"));
      }
    }
    read_opt(j, "steps", cfg.steps);
    read_opt(j, "seed", cfg.seed);
    if (j.contains("observer")) {
      const json& o = j.at("observer");
      read_opt(o, "tau", cfg.observer.tau);
      read_opt(o, "gamma", cfg.observer.gamma);
      read_opt(o, "epsilon", cfg.observer.epsilon);
      read_opt(o, "x0", cfg.observer.x0);
      read_opt(o, "xhat0", cfg.observer.xhat0);
      read_opt(o, "k0_variance", cfg.observer.k0_variance);
    }
    if (j.contains("data_driven")) {
      const json& d = j.at("data_driven");
      read_opt(d, "gamma", cfg.data_driven.gamma);
      read_opt(d, "mu", cfg.data_driven.mu);
      read_opt(d, "eps_rl", cfg.data_driven.eps_rl);
      read_opt(d, "max_iters", cfg.data_driven.max_iters);
      read_opt(d, "N", cfg.data_driven.N);
      read_opt(d, "x0", cfg.data_driven.x0);
      read_opt(d, "samples", cfg.data_driven.samples);
    }
    if (j.contains("noise")) {
      const json& n = j.at("noise");
      read_opt(n, "sigma", cfg.noise.sigma);
      read_opt(n, "omega2", cfg.noise.omega2);
      read_opt(n, "bandwidth", cfg.noise.bandwidth);
    }
    if (j.contains("tune")) {
      const json& t = j.at("tune");
      read_opt(t, "enabled", cfg.tune.enabled);
      read_opt(t, "bounds", cfg.tune.bounds);
      read_opt(t, "init", cfg.tune.acquisition.init_samples);
      read_opt(t, "iters", cfg.tune.acquisition.iterations);
      read_opt(t, "epsilon", cfg.tune.acquisition.epsilon);
      read_opt(t, "candidates", cfg.tune.acquisition.candidate_count);
      read_opt(t, "seed", cfg.tune.acquisition.seed);
      read_opt(t, "horizon", cfg.tune.horizon);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kIo, std::string("config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
  return config_from_json(io::read_text(path));
}

std::string summary_to_json(const Summary& s) {
  json j;
  j["name"] = s.name;
  j["pipeline"] = s.pipeline;
  j["final_outputs"] = detail::to_json(s.final_outputs);
  j["tracking_error_l2"] = s.tracking_error_l2;
  j["perf_index_100"] = s.perf_index_100;
  j["perf_index_1000"] = s.perf_index_1000;
  j["wall_time"] = s.wall_time;
  j["seed"] = s.seed;
  j["iterations"] = s.iterations;
  j["converged"] = s.converged;
  j["q"] = detail::to_json(s.q);
  j["r"] = detail::to_json(s.r);
  if (s.estimation_error_100) j["estimation_error_100"] = *s.estimation_error_100;
  if (s.output_estimation_error_100) {
    j["output_estimation_error_100"] = *s.output_estimation_error_100;
  }
  if (s.excitation_rank) j["excitation_rank"] = *s.excitation_rank;
  return j.dump(2) + "\n";
}

Summary summary_from_json(const std::string& text) {
  Summary s;
  try {
    const json j = json::parse(text);
    read_opt(j, "name", s.name);
    read_opt(j, "pipeline", s.pipeline);
    s.final_outputs = detail::vector_from_json(j.at("final_outputs"));
    s.tracking_error_l2 = j.at("tracking_error_l2").get<double>();
    s.perf_index_100 = j.at("perf_index_100").get<double>();
    s.perf_index_1000 = j.at("perf_index_1000").get<double>();
    read_opt(j, "wall_time", s.wall_time);
    read_opt(j, "seed", s.seed);
    read_opt(j, "iterations", s.iterations);
    read_opt(j, "converged", s.converged);
    if (j.contains("q")) s.q = detail::vector_from_json(j.at("q"));
    if (j.contains("r")) s.r = detail::vector_from_json(j.at("r"));
    if (j.contains("estimation_error_100")) {
      s.estimation_error_100 = j.at("estimation_error_100").get<double>();
    }
    if (j.contains("output_estimation_error_100")) {
      s.output_estimation_error_100 =
          j.at("output_estimation_error_100").get<double>();
    }
    if (j.contains("excitation_rank")) {
      s.excitation_rank = j.at("excitation_rank").get<Eigen::Index>();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kIo, std::string("summary: ") + e.what());
  }
  return s;
}

void summarize_trace(const SimulationTrace& trace, const CostWeights& w,
                     const ReferenceGenerator& gen, Summary& s) {
  const std::size_t t_final = std::min<std::size_t>(100, trace.size());
  if (trace.empty()) {
    s.final_outputs = Vector();
    s.tracking_error_l2 = 0.0;
  } else {
    s.final_outputs = trace.output_at(t_final);
    s.tracking_error_l2 = (reference_at(gen, t_final) - s.final_outputs).norm();
  }
  s.perf_index_100 = performance_index(trace, w, std::min<std::size_t>(100, trace.size()));
  s.perf_index_1000 =
      performance_index(trace, w, std::min<std::size_t>(1000, trace.size()));
  s.q = w.Q.diagonal();
  s.r = w.R.diagonal();
}

ExperimentReport run_observer_pipeline(const StateSpaceModel& model,
                                       const ReferenceGenerator& gen,
                                       const CostWeights& w,
                                       const fixtures::ObserverParams& params,
                                       std::uint64_t seed, std::size_t steps) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport report;
  const AugmentedSystem aug = in_stage("augment", [&] { return augment(model, gen, w); });
  const LqtSolution sol = in_stage("solve", [&] {
    const Matrix K0 = random_initial_gain(model.m(), model.n() + model.p(),
                                          params.k0_variance, seed);
    SolveOptions opts;
    opts.epsilon = params.epsilon;
    return solve_lqt(aug, w, K0, opts);
  });
  report.trace = in_stage("simulate", [&] {
    LuenbergerObserver obs(model, params.tau,
                           Vector::Constant(model.n(), params.xhat0));
    return run_observer_closed_loop(model, gen, w, sol, obs,
                                    Vector::Constant(model.n(), params.x0), steps);
  });
  report.solution = sol;

  Summary& s = report.summary;
  s.pipeline = std::string(to_string(Pipeline::kObserver));
  s.seed = seed;
  s.iterations = sol.iterations;
  summarize_trace(report.trace, w, gen, s);
  const auto& recs = report.trace.records();
  if (!recs.empty()) {
    const TraceRecord& rec = recs[std::min<std::size_t>(100, recs.size() - 1)];
    s.estimation_error_100 = estimation_error(*rec.xhat, *rec.x);
    s.output_estimation_error_100 = (*rec.yhat - rec.y).norm();
  }
  s.wall_time = seconds_since(start);
  return report;
}

DataDrivenSetup::DataDrivenSetup(const StateSpaceModel& model,
                                 const ReferenceGenerator& gen,
                                 const fixtures::DataDrivenParams& params,
                                 const ProbingNoiseConfig& noise)
    : model_(model),
      gen_(gen),
      params_(params),
      data_(in_stage("gen-data",
                     [&] {
                       return generate_dataset(
                           model, fixtures::data_gain(), noise, gen,
                           params.samples,
                           Vector::Constant(model.n(), params.x0));
                     })),
      eqs_(in_stage("train", [&] {
        return NormalEquations(data_, params.N, params.mu);
      })) {}

TrainingResult DataDrivenSetup::train(const CostWeights& w) const {
  return in_stage("train", [&] {
    TrainingConfig cfg;
    cfg.gamma = params_.gamma;
    cfg.mu = params_.mu;
    cfg.eps = params_.eps_rl;
    cfg.max_iters = params_.max_iters;
    cfg.N = params_.N;
    return value_iteration(eqs_, cfg, w);
  });
}

SimulationTrace DataDrivenSetup::run(const KernelMatrix& kernel,
                                     const CostWeights& w,
                                     std::size_t steps) const {
  return in_stage("run-dd", [&] {
    Plant plant(model_, Vector::Constant(model_.n(), params_.x0));
    return run_data_driven_closed_loop(plant, kernel, gen_, w, steps);
  });
}

ExperimentReport DataDrivenSetup::run_pipeline(const CostWeights& w,
                                               std::size_t steps) const {
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport report;
  const TrainingResult tr = train(w);
  report.trace = run(tr.kernel, w, steps);
  report.kernel = tr.kernel;
  Summary& s = report.summary;
  s.pipeline = std::string(to_string(Pipeline::kDataDriven));
  s.iterations = tr.iterations;
  s.converged = tr.converged;
  s.excitation_rank = tr.excitation_rank;
  summarize_trace(report.trace, w, gen_, s);
  s.wall_time = seconds_since(start);
  return report;
}

CostWeights weights_from_theta(const Vector& theta, Eigen::Index p,
                               double gamma) {
  return CostWeights::diagonal(theta.head(p), theta.tail(theta.size() - p),
                               gamma);
}

FitnessEvaluator observer_evaluator(const StateSpaceModel& model,
                                    const ReferenceGenerator& gen,
                                    const fixtures::ObserverParams& params,
                                    std::uint64_t seed, std::size_t horizon) {
  return [=](const Vector& theta) {
    const CostWeights w = weights_from_theta(theta, model.p(), params.gamma);
    const ExperimentReport rep =
        run_observer_pipeline(model, gen, w, params, seed, horizon);
    return fitness(rep.trace, horizon);
  };
}

FitnessEvaluator datadriven_evaluator(const DataDrivenSetup& setup,
                                      double gamma, std::size_t horizon) {
  return [&setup, gamma, horizon](const Vector& theta) {
    const CostWeights w =
        weights_from_theta(theta, setup.dataset().p(), gamma);
    const TrainingResult tr = setup.train(w);
    return fitness(setup.run(tr.kernel, w, horizon), horizon);
  };
}

SearchDomain resolve_bounds(const ExperimentConfig& cfg) {
  const StateSpaceModel model = cfg.model();
  std::string name = cfg.tune.bounds;
  if (name.empty()) {
    name = cfg.pipeline == Pipeline::kObserver ? "observer" : "datadriven";
  }
  if (name == "observer" || name == "bounds-observer") {
    return SearchDomain::observer_preset(model.p(), model.m());
  }
  if (name == "datadriven" || name == "bounds-datadriven") {
    return SearchDomain::datadriven_preset(model.p(), model.m());
  }
  return io::read_bounds(name);
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const StateSpaceModel model = in_stage("config", [&] { return cfg.model(); });
  const ReferenceGenerator gen =
      in_stage("config", [&] { return cfg.reference_generator(); });
  CostWeights w = in_stage("config", [&] { return cfg.weights(); });

  std::optional<DataDrivenSetup> setup;
  if (cfg.pipeline == Pipeline::kDataDriven) {
    ProbingNoiseConfig noise = cfg.noise;
    noise.seed = cfg.seed;
    setup.emplace(model, gen, cfg.data_driven, noise);
  }

  std::optional<BoResult> tuning;
  if (cfg.tune.enabled) {
    tuning = in_stage("tune", [&] {
      const SearchDomain domain = resolve_bounds(cfg);
      const FitnessEvaluator eval =
          cfg.pipeline == Pipeline::kObserver
              ? observer_evaluator(model, gen, cfg.observer, cfg.seed,
                                   cfg.tune.horizon)
              : datadriven_evaluator(*setup, cfg.gamma(), cfg.tune.horizon);
      return optimize(eval, domain, cfg.tune.acquisition);
    });
    w = weights_from_theta(tuning->theta_best, model.p(), cfg.gamma());
  }

  ExperimentReport report =
      cfg.pipeline == Pipeline::kObserver
          ? run_observer_pipeline(model, gen, w, cfg.observer, cfg.seed, cfg.steps)
          : setup->run_pipeline(w, cfg.steps);
  report.tuning = std::move(tuning);
  report.summary.name = cfg.name;
  report.summary.seed = cfg.seed;
  report.summary.wall_time = seconds_since(start);
  return report;
}

void write_report(const ExperimentReport& report, const fs::path& dir) {
  in_stage("write", [&] {
    fs::create_directories(dir);
    io::write_trace_csv(dir / "trace.csv", report.trace);
    io::write_text(dir / "summary.json", summary_to_json(report.summary));
    if (report.kernel) io::write_kernel(dir / "kernel.csv", *report.kernel);
    if (report.tuning) {
      io::write_bo_history_csv(dir / "bo_history.csv", *report.tuning);
      json best;
      best["theta"] = detail::to_json(report.tuning->theta_best);
      best["fitness"] = report.tuning->fitness_best;
      io::write_text(dir / "best_theta.json", best.dump(2) + "\n");
    }
    return 0;
  });
}

Reduction compare_runs(const Summary& a, const Summary& b) {
  auto pct = [](double x, double y) {
    if (x == 0.0) {
      if (y == 0.0) return 0.0;
      throw Error(ErrorKind::kInvalidArgument,
                  "compare: baseline value is zero");
    }
    return (1.0 - y / x) * 100.0;
  };
  return {pct(a.perf_index_1000, b.perf_index_1000),
          pct(a.tracking_error_l2, b.tracking_error_l2)};
}

}  // namespace lqt

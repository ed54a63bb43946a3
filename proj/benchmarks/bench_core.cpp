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

#include <benchmark/benchmark.h>

#include <random>

#include "lqt/bayesopt.hpp"
#include "lqt/data_driven.hpp"
#include "lqt/fixtures.hpp"
#include "lqt/model_based.hpp"

namespace {

using namespace lqt;

const IoDataset& extruder_data() {
  static const IoDataset data = [] {
    ProbingNoiseConfig noise;
    return generate_dataset(fixtures::extruder_model(), fixtures::data_gain(), noise,
                            fixtures::extruder_reference(), 15000,
                            Vector::Constant(6, 50.0));
  }();
  return data;
}

void BM_KronRow(benchmark::State& state) {
  const Vector z = Vector::LinSpaced(84, -1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(kron_row(z));
}
BENCHMARK(BM_KronRow);

void BM_NormalEquationsBuild(benchmark::State& state) {
  const IoDataset& data = extruder_data();
  for (auto _ : state) {
    NormalEquations eqs(data, 6, 1e-4);
    benchmark::DoNotOptimize(eqs.excitation_rank());
  }
}
BENCHMARK(BM_NormalEquationsBuild)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_ValueIterationStep(benchmark::State& state) {
  static const NormalEquations eqs(extruder_data(), 6, 1e-4);
  TrainingConfig cfg;
  cfg.max_iters = 10;
  const CostWeights w = fixtures::identity_weights();
  for (auto _ : state) benchmark::DoNotOptimize(value_iteration(eqs, cfg, w));
  state.SetItemsProcessed(state.iterations() * cfg.max_iters);
}
BENCHMARK(BM_ValueIterationStep)->Unit(benchmark::kMillisecond);

void BM_LyapunovSolve(benchmark::State& state) {
  const CostWeights w = fixtures::identity_weights();
  const AugmentedSystem aug =
      augment(fixtures::extruder_model(), fixtures::extruder_reference(), w);
  const Matrix K = Matrix::Zero(7, 11);
  for (auto _ : state) benchmark::DoNotOptimize(lyapunov_fixed_point(aug, w, K));
}
BENCHMARK(BM_LyapunovSolve)->Unit(benchmark::kMicrosecond);

void BM_SolveLqt(benchmark::State& state) {
  const CostWeights w = fixtures::identity_weights();
  const AugmentedSystem aug =
      augment(fixtures::extruder_model(), fixtures::extruder_reference(), w);
  const Matrix K0 = random_initial_gain(7, 11, 10.0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lqt(aug, w, K0));
}
BENCHMARK(BM_SolveLqt)->Unit(benchmark::kMillisecond);

void BM_GpPosterior(benchmark::State& state) {
  GpState gp;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto point = [&] {
    Vector x(12);
    for (Eigen::Index i = 0; i < 12; ++i) x(i) = unit(rng);
    return x;
  };
  for (int i = 0; i < state.range(0); ++i) gp.add(point(), unit(rng));
  const Vector x = point();
  for (auto _ : state) benchmark::DoNotOptimize(gp.posterior(x));
}
BENCHMARK(BM_GpPosterior)->Arg(50)->Arg(150);

}  // namespace
BENCHMARK_MAIN();

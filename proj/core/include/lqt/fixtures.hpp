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

#include <cstdint>

#include "lqt/statespace.hpp"

/// Six-cell extruder thermal model, its controller settings and the target
/// numbers the experiments compare against.
namespace lqt::fixtures {

StateSpaceModel extruder_model();
/// Constant reference {150, 160, 170, 175, 180}.
ReferenceGenerator extruder_reference();
/// Stabilizing state-feedback gain used to generate training data (7 x 6).
Matrix data_gain();

CostWeights identity_weights(double gamma = 0.99);
/// Tuned diagonal weights of the observer-based controller.
CostWeights observer_tuned_weights(double gamma = 0.99);
/// Tuned diagonal weights of the data-driven controller.
CostWeights datadriven_tuned_weights(double gamma = 0.99);

/// Observer-based controller settings.
struct ObserverParams {
  double tau = 0.002;
  double gamma = 0.99;
  double epsilon = 0.01;
  double x0 = 20.0;
  double xhat0 = 50.0;
  double k0_variance = 10.0;
};

/// Data-driven controller settings.
struct DataDrivenParams {
  double gamma = 0.99;
  double mu = 1e-4;
  double eps_rl = 1e-3;
  int max_iters = 1000;
  int N = 6;
  double x0 = 50.0;
  std::size_t samples = 15000;
};

/// Target outcomes, kept for reporting and comparison.
struct Reported {
  static Vector observer_y();             ///< y(100), identity weights
  static constexpr double observer_error = 0.0376;
  static constexpr double observer_index_1000 = 183436.2;
  static constexpr double observer_index_100 = 183362.5;
  static constexpr double observer_tuned_error = 0.0274;
  static constexpr double observer_tuned_index_1000 = 76072.6;
  static constexpr double observer_reduction = 58.5;
  static constexpr double observer_estimation_error = 0.008;

  static Vector datadriven_y();
  static constexpr double datadriven_error = 1.2942;
  static constexpr double datadriven_index_1000 = 1074985.0;
  static Vector datadriven_tuned_y();
  static constexpr double datadriven_tuned_error = 0.3154;
  static constexpr double datadriven_tuned_index_100 = 204635.7;
  static constexpr double datadriven_tuned_index_1000 = 206358.8;
  static constexpr double datadriven_reduction = 80.8;
};

/// FNV-1a over the bit patterns of every numeric fixture above.
std::uint64_t fixture_hash();

/// FNV-1a over the bit patterns of A, B, C (used in dataset sidecars).
std::uint64_t model_hash(const StateSpaceModel& model);

}  // namespace lqt::fixtures

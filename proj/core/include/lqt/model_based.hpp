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

#include "lqt/observer.hpp"
#include "lqt/statespace.hpp"

namespace lqt {

struct LyapunovOptions {
  double tolerance = 1e-9;      ///< Frobenius norm of the fixed-point residual
  int max_iterations = 100000;
};

/// Solves P = Q1 + K'RK + gamma (T - B1 K)' P (T - B1 K) by fixed-point
/// iteration from P = 0, symmetrizing every sweep.
///
/// Throws kUnstable when sqrt(gamma) (T - B1 K) has spectral radius >= 1 and
/// kNotConverged when the sweep budget runs out; both messages carry the
/// spectral radius.
Matrix lyapunov_fixed_point(const AugmentedSystem& aug, const Matrix& R,
                            double gamma, const Matrix& K,
                            const LyapunovOptions& options = {});
Matrix lyapunov_fixed_point(const AugmentedSystem& aug, const CostWeights& w,
                            const Matrix& K,
                            const LyapunovOptions& options = {});

/// Frobenius norm of P - (Q1 + K'RK + gamma (T-B1K)' P (T-B1K)).
double lyapunov_residual(const AugmentedSystem& aug, const Matrix& R,
                         double gamma, const Matrix& K, const Matrix& P);

/// K = (R + gamma B1' P B1)^-1 gamma B1' P T
Matrix gain_update(const AugmentedSystem& aug, const Matrix& R, double gamma,
                   const Matrix& P);
Matrix gain_update(const AugmentedSystem& aug, const CostWeights& w,
                   const Matrix& P);

struct LqtSolution {
  Matrix P;
  Matrix K;
  int iterations = 0;
  double final_gain_delta = 0.0;
  /// Outer steps taken while K^j was not discount-stabilizing; those steps
  /// apply a single Bellman sweep instead of a full Lyapunov solve.
  int bellman_sweeps = 0;
};

struct SolveOptions {
  double epsilon = 0.01;
  int max_outer_iterations = 1000;
  LyapunovOptions lyapunov;
};

/// Gain iteration: evaluate K^j through the Lyapunov equation, improve with
/// gain_update, stop once ||K^j - K^{j-1}||_F <= epsilon.
LqtSolution solve_lqt(const AugmentedSystem& aug, const CostWeights& w,
                      const Matrix& K0, const SolveOptions& options = {});

/// m x (n+p) matrix of iid N(0, variance) draws.
Matrix random_initial_gain(Eigen::Index m, Eigen::Index cols, double variance,
                           std::uint64_t seed);

/// Observer-in-the-loop run: u = -K [xhat; r]; the plant advances hidden and
/// the observer updates from the measured y. Records t = 0..steps-1 and the
/// final output y(steps).
///
/// Throws kDiverged when any signal leaves the finite range.
SimulationTrace run_observer_closed_loop(const StateSpaceModel& model,
                                         const ReferenceGenerator& gen,
                                         const CostWeights& w,
                                         const LqtSolution& solution,
                                         LuenbergerObserver observer,
                                         const Vector& x0, std::size_t steps);

}  // namespace lqt

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

#include "lqt/model_based.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "lqt/plant.hpp"

namespace lqt {
namespace {

void check_gain_shape(const AugmentedSystem& aug, const Matrix& K) {
  require_dim(K.rows(), aug.B1.cols(), "gain rows");
  require_dim(K.cols(), aug.T.rows(), "gain columns");
}

Matrix bellman_sweep(const Matrix& stage, double gamma, const Matrix& closed,
                     const Matrix& P) {
  Matrix next = stage + gamma * closed.transpose() * P * closed;
  return 0.5 * (next + next.transpose());
}

}  // namespace

Matrix lyapunov_fixed_point(const AugmentedSystem& aug, const Matrix& R,
                            double gamma, const Matrix& K,
                            const LyapunovOptions& options) {
  check_gain_shape(aug, K);
  const Matrix closed = aug.T - aug.B1 * K;
  const double rho = std::sqrt(gamma) * spectral_radius(closed);
  if (!(rho < 1.0)) {
    std::ostringstream os;
    os << "lyapunov: sqrt(gamma)(T - B1 K) has spectral radius " << rho
       << " >= 1; the fixed-point iteration cannot converge";
    throw Error(ErrorKind::kUnstable, os.str());
  }
  const Matrix stage = aug.Q1 + K.transpose() * R * K;
  Matrix P = Matrix::Zero(aug.T.rows(), aug.T.cols());
  for (int it = 0; it < options.max_iterations; ++it) {
    Matrix next = bellman_sweep(stage, gamma, closed, P);
    const double delta = (next - P).norm();
    P = std::move(next);
    if (delta <= options.tolerance) return P;
  }
  std::ostringstream os;
  os << "lyapunov: no convergence within " << options.max_iterations
     << " sweeps (discounted spectral radius " << rho << ")";
  throw Error(ErrorKind::kNotConverged, os.str());
}

Matrix lyapunov_fixed_point(const AugmentedSystem& aug, const CostWeights& w,
                            const Matrix& K, const LyapunovOptions& options) {
  return lyapunov_fixed_point(aug, w.R, w.gamma, K, options);
}

double lyapunov_residual(const AugmentedSystem& aug, const Matrix& R,
                         double gamma, const Matrix& K, const Matrix& P) {
  const Matrix closed = aug.T - aug.B1 * K;
  const Matrix rhs =
      aug.Q1 + K.transpose() * R * K + gamma * closed.transpose() * P * closed;
  return (P - rhs).norm();
}

Matrix gain_update(const AugmentedSystem& aug, const Matrix& R, double gamma,
                   const Matrix& P) {
  require_dim(P.rows(), aug.T.rows(), "gain_update: P");
  const Matrix inner = R + gamma * aug.B1.transpose() * P * aug.B1;
  Eigen::LDLT<Matrix> ldlt(inner);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().cwiseAbs().minCoeff() <= 1e-14 * inner.norm()) {
    throw Error(ErrorKind::kSingular,
                "gain_update: R + gamma B1' P B1 is singular");
  }
  return ldlt.solve(gamma * aug.B1.transpose() * P * aug.T);
}

Matrix gain_update(const AugmentedSystem& aug, const CostWeights& w,
                   const Matrix& P) {
  return gain_update(aug, w.R, w.gamma, P);
}

LqtSolution solve_lqt(const AugmentedSystem& aug, const CostWeights& w,
                      const Matrix& K0, const SolveOptions& options) {
  check_gain_shape(aug, K0);
  LqtSolution sol;
  sol.K = K0;
  sol.P = Matrix::Zero(aug.T.rows(), aug.T.cols());
  const double sqrt_gamma = std::sqrt(w.gamma);

  for (int j = 1; j <= options.max_outer_iterations; ++j) {
    const Matrix closed = aug.T - aug.B1 * sol.K;
    if (sqrt_gamma * spectral_radius(closed) < 1.0) {
      sol.P = lyapunov_fixed_point(aug, w.R, w.gamma, sol.K, options.lyapunov);
    } else {
      // K^j does not stabilize the discounted loop; advance the value
      // estimate by one Bellman sweep instead.
      const Matrix stage = aug.Q1 + sol.K.transpose() * w.R * sol.K;
      sol.P = bellman_sweep(stage, w.gamma, closed, sol.P);
      ++sol.bellman_sweeps;
    }
    Matrix next = gain_update(aug, w, sol.P);
    sol.final_gain_delta = (next - sol.K).norm();
    sol.K = std::move(next);
    sol.iterations = j;
    if (!sol.K.allFinite() || !sol.P.allFinite()) {
      throw Error(ErrorKind::kDiverged, "solve_lqt: iterates became non-finite");
    }
    if (sol.final_gain_delta <= options.epsilon) {
      // Evaluate the accepted gain so P and K are consistent.
      sol.P = lyapunov_fixed_point(aug, w.R, w.gamma, sol.K, options.lyapunov);
      return sol;
    }
  }
  std::ostringstream os;
  os << "solve_lqt: gain iteration did not converge within "
     << options.max_outer_iterations << " iterations (last delta "
     << sol.final_gain_delta << ")";
  throw Error(ErrorKind::kNotConverged, os.str());
}

Matrix random_initial_gain(Eigen::Index m, Eigen::Index cols, double variance,
                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(variance));
  Matrix K(m, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) K(i, j) = normal(rng);
  }
  return K;
}

SimulationTrace run_observer_closed_loop(const StateSpaceModel& model,
                                         const ReferenceGenerator& gen,
                                         const CostWeights& w,
                                         const LqtSolution& solution,
                                         LuenbergerObserver observer,
                                         const Vector& x0, std::size_t steps) {
  const auto n = model.n();
  const auto p = model.p();
  require_dim(solution.K.rows(), model.m(), "closed loop: gain rows");
  require_dim(solution.K.cols(), n + p, "closed loop: gain columns");
  require_dim(gen.p(), p, "closed loop: reference");

  Plant plant(model, x0);
  SimulationTrace trace(w.gamma);
  Vector r = gen.r0;
  Vector augmented(n + p);

  for (std::size_t t = 0; t < steps; ++t) {
    augmented << observer.estimate(), r;
    const Vector u = -solution.K * augmented;
    const Vector y = plant.measure();

    TraceRecord rec;
    rec.x = plant.diagnostic_state();
    rec.xhat = observer.estimate();
    rec.y = y;
    rec.yhat = observer.output_estimate();
    rec.u = u;
    rec.r = r;
    rec.cost = stage_cost(w, y, r, u);
    if (!std::isfinite(rec.cost) || !u.allFinite()) {
      std::ostringstream os;
      os << "closed loop: signals overflowed at t=" << t;
      throw Error(ErrorKind::kDiverged, os.str());
    }
    trace.append(std::move(rec));

    observer.observe_step(u, y);
    plant.apply(u);
    r = reference_step(gen, r);
  }
  trace.set_final_output(plant.measure());
  return trace;
}

}  // namespace lqt

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

#include <cstddef>
#include <optional>
#include <vector>

#include "lqt/types.hpp"

namespace lqt {

/// Singular values below this fraction of the largest one count as zero in
/// every rank test of the library.
inline constexpr double kRankTolerance = 1e-9;

/// Smallest admissible eigenvalue for the positive-definiteness check on
/// cost weights.
inline constexpr double kPdTolerance = 1e-12;

/// Discrete-time plant x(t+1) = A x(t) + B u(t), y(t) = C x(t).
class StateSpaceModel {
 public:
  StateSpaceModel(Matrix a, Matrix b, Matrix c);

  const Matrix& A() const { return a_; }
  const Matrix& B() const { return b_; }
  const Matrix& C() const { return c_; }

  Eigen::Index n() const { return a_.rows(); }
  Eigen::Index m() const { return b_.cols(); }
  Eigen::Index p() const { return c_.rows(); }

 private:
  Matrix a_;
  Matrix b_;
  Matrix c_;
};

/// Reference dynamics r(t+1) = F r(t).
struct ReferenceGenerator {
  ReferenceGenerator(Matrix f, Vector r0);

  /// Constant reference (F = I).
  static ReferenceGenerator constant(const Vector& r0);

  Matrix F;
  Vector r0;

  Eigen::Index p() const { return F.rows(); }
};

/// Quadratic cost weights and discount factor.
struct CostWeights {
  CostWeights(Matrix q, Matrix r, double gamma);

  static CostWeights diagonal(const Vector& q_diag, const Vector& r_diag,
                              double gamma);

  Matrix Q;
  Matrix R;
  double gamma;
};

/// Tracking problem posed as regulation of X = [x; r].
struct AugmentedSystem {
  Matrix T;
  Matrix B1;
  Matrix Q1;
  Eigen::Index n = 0;
  Eigen::Index p = 0;
};

/// One simulation step. Optional members are absent when the producing loop
/// has no access to them (the data-driven loop never sees x).
struct TraceRecord {
  std::optional<Vector> x;
  std::optional<Vector> xhat;
  Vector y;
  std::optional<Vector> yhat;
  Vector u;
  Vector r;
  double cost = 0.0;
  double cum_cost = 0.0;
};

/// Append-only record of a closed-loop run. `cum_cost` of record t is the
/// discounted sum of the stage costs of records 0..t.
class SimulationTrace {
 public:
  explicit SimulationTrace(double gamma) : gamma_(gamma) {}

  void append(TraceRecord record);

  /// Output after the last recorded step, i.e. y(size()).
  void set_final_output(Vector y) { final_output_ = std::move(y); }
  const std::optional<Vector>& final_output() const { return final_output_; }

  /// y(t) for 0 <= t <= size(); t == size() reads the final output.
  Vector output_at(std::size_t t) const;

  const std::vector<TraceRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  double gamma() const { return gamma_; }
  double discounted_cost() const {
    return records_.empty() ? 0.0 : records_.back().cum_cost;
  }

 private:
  double gamma_;
  double discount_ = 1.0;
  std::vector<TraceRecord> records_;
  std::optional<Vector> final_output_;
};

Vector step(const StateSpaceModel& model, const Vector& x, const Vector& u);
Vector output(const StateSpaceModel& model, const Vector& x);

Vector reference_step(const ReferenceGenerator& gen, const Vector& r);

/// (y - r)' Q (y - r) + u' R u
double stage_cost(const CostWeights& w, const Vector& y, const Vector& r,
                  const Vector& u);

/// Discounted sum of the first `horizon` stage costs of the trace, recomputed
/// under `w`.
double performance_index(const SimulationTrace& trace, const CostWeights& w,
                         std::size_t horizon);

Matrix controllability_matrix(const StateSpaceModel& model);
bool is_controllable(const StateSpaceModel& model);

Matrix observability_matrix(const StateSpaceModel& model);
bool is_observable(const StateSpaceModel& model);

AugmentedSystem augment(const StateSpaceModel& model,
                        const ReferenceGenerator& gen, const CostWeights& w);

// Numerical helpers shared across modules.

/// Number of singular values above kRankTolerance * sigma_max.
Eigen::Index matrix_rank(const Matrix& m);

double spectral_radius(const Matrix& m);

/// Smallest eigenvalue of the symmetric part of `m`.
double min_symmetric_eigenvalue(const Matrix& m);

bool all_finite(const Matrix& m);

}  // namespace lqt

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

#include <optional>
#include <vector>

#include "lqt/datagen.hpp"
#include "lqt/plant.hpp"
#include "lqt/statespace.hpp"

namespace lqt {

/// Segment map of Zbar = [ubar; ybar; r_lag; u], most recent sample first
/// inside ubar and ybar.
struct BlockLayout {
  Eigen::Index N = 0;
  Eigen::Index m = 0;
  Eigen::Index p = 0;

  Eigen::Index d() const { return (N + 1) * (m + p); }
  Eigen::Index ubar_offset() const { return 0; }
  Eigen::Index ybar_offset() const { return N * m; }
  Eigen::Index r_offset() const { return N * (m + p); }
  Eigen::Index u_offset() const { return N * (m + p) + p; }
  /// Length of [ubar; ybar; r_lag].
  Eigen::Index history_dim() const { return d() - m; }

  void validate() const;
};

struct HistoryWindow {
  Vector ubar;   ///< [u(t-1); ...; u(t-N)]
  Vector ybar;   ///< [y(t-1); ...; y(t-N)]
  Vector r_lag;  ///< r(t-N)

  Vector stacked() const;
};

/// History preceding sample t of the dataset; requires t >= N.
HistoryWindow history_at(const IoDataset& data, std::size_t t, Eigen::Index N);

Vector make_zbar(const HistoryWindow& hist, const Vector& u);

/// z' (x) z' under the column-major vec convention, so that
/// kron_row(z).dot(vec(H)) == z' H z.
Vector kron_row(const Vector& z);

struct ReconstructionMatrices {
  Matrix U_N;  ///< [B, AB, ..., A^{N-1} B]
  Matrix W_N;  ///< [C A^{N-1}; ...; C A; C]
  Matrix D_N;  ///< block Toeplitz map from ubar to ybar
  Matrix M;    ///< [x(t); r(t)] = M [ubar; ybar; r_lag]
};

/// Model-based reconstruction of the lagged state. Requires N >= n and a
/// full-column-rank W_N.
ReconstructionMatrices build_reconstruction_matrices(
    const StateSpaceModel& model, const ReferenceGenerator& gen,
    Eigen::Index N);

/// (W'W)^-1 W' for full column rank W; throws kSingular otherwise.
Matrix pseudo_inverse(const Matrix& W);

/// Symmetric d x d quadratic-form kernel over Zbar.
struct KernelMatrix {
  Matrix H;
  BlockLayout layout;

  /// H_uu block (m x m).
  Matrix uu() const;
  /// [H_u,ubar  H_u,ybar  H_u,r] (m x history_dim).
  Matrix u_history() const;

  /// Throws unless H is d x d and symmetric to 1e-10.
  void validate() const;
};

/// Q-function kernel over [X; u] for the augmented system:
/// [[Q1 + g T'PT, g T'PB1], [g B1'PT, R + g B1'PB1]].
Matrix augmented_kernel(const AugmentedSystem& aug, const Matrix& R,
                        double gamma, const Matrix& P);

/// blockdiag(M, I)' H blockdiag(M, I) with P from the model-based solver.
KernelMatrix kernel_direct(const StateSpaceModel& model,
                           const ReferenceGenerator& gen, const CostWeights& w,
                           const Matrix& P, Eigen::Index N);

/// Feedback matrix G with u = G [ubar; ybar; r_lag], G = -H_uu^-1 H_u,hist.
/// Throws kSingular, quoting the condition number, when H_uu is singular.
Matrix policy_gain(const KernelMatrix& kernel);

Vector policy_from_kernel(const KernelMatrix& kernel, const HistoryWindow& hist);

struct TrainingConfig {
  double gamma = 0.99;
  double mu = 1e-4;
  double eps = 1e-3;
  int max_iters = 1000;
  Eigen::Index N = 6;
  std::optional<Matrix> H0;  ///< identity when empty
};

/// Regularized normal equations of the Bellman least-squares fit.
///
/// The regressors span only part of R^d (ybar is a function of x(t-N) and
/// ubar), so L = sum kron_row(z) kron_row(z)' is rank deficient. The solve is
/// carried out on the span of the data: with V an orthonormal basis of the
/// regressors and w = V'z, the quadratic features of w in an orthonormal
/// symmetric basis give a well-conditioned Gram matrix L_w. H = V H_w V'
/// equals the full d^2 solution of (L + mu I) vec(H) = rhs exactly, because
/// every right-hand side lies in that span.
class NormalEquations {
 public:
  /// Uses samples t = N .. size-2 (t+1 is needed for the Bellman target).
  NormalEquations(const IoDataset& data, Eigen::Index N, double mu);

  const BlockLayout& layout() const { return layout_; }
  Eigen::Index rows() const { return z_.rows(); }
  /// Rank of the regressor matrix.
  Eigen::Index excitation_rank() const { return basis_.cols(); }
  /// Regularization that made the factorization succeed (mu or escalated).
  double regularization() const { return mu_used_; }

  /// Rows are Zbar(t).
  const Matrix& z() const { return z_; }
  /// Rows are [ubar; ybar; r_lag] of Zbar(t+1).
  const Matrix& next_history() const { return next_hist_; }
  /// Rows are y(t) - r(t) and u(t).
  const Matrix& tracking_error() const { return err_; }
  const Matrix& inputs() const { return u_; }

  /// Orthonormal basis V (d x rank) of the regressors.
  const Matrix& basis() const { return basis_; }
  /// Rows are w(t) = V' Zbar(t).
  const Matrix& reduced() const { return w_; }

  /// Solves (L + mu I) vec(H) = sum_t c(t) kron_row(Zbar(t)).
  Matrix solve(const Vector& targets) const;
  /// Same solve returning H_w, where H = V H_w V'.
  Matrix solve_reduced(const Vector& targets) const;

 private:
  BlockLayout layout_;
  Matrix z_;
  Matrix next_hist_;
  Matrix err_;
  Matrix u_;
  Matrix basis_;
  Matrix w_;
  Eigen::LLT<Matrix> chol_;
  double mu_used_ = 0.0;
};

struct TrainingResult {
  KernelMatrix kernel;
  int iterations = 0;
  double final_delta = 0.0;
  bool converged = false;
  /// Mean |Zbar' H^{i+1} Zbar - c_i(t)| per iteration.
  std::vector<double> residual_history;
  std::vector<double> delta_history;
  Eigen::Index excitation_rank = 0;
  double regularization = 0.0;
};

/// Value iteration on measured data. When the iteration budget runs out the
/// kernel with the smallest Bellman residual is returned with
/// converged == false.
TrainingResult value_iteration(const IoDataset& data, const TrainingConfig& cfg,
                               const CostWeights& w);

/// Same, reusing a prebuilt factorization (L does not depend on Q and R).
TrainingResult value_iteration(const NormalEquations& eqs,
                               const TrainingConfig& cfg, const CostWeights& w);

/// Closed loop on a black-box plant. Inputs for t < N come from the columns
/// of `warmup` (zeros when empty); later inputs come from the kernel policy.
SimulationTrace run_data_driven_closed_loop(Plant& plant,
                                            const KernelMatrix& kernel,
                                            const ReferenceGenerator& gen,
                                            const CostWeights& w,
                                            std::size_t steps,
                                            const Matrix& warmup = Matrix());

}  // namespace lqt

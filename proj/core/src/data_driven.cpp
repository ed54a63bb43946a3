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

#include "lqt/data_driven.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lqt {
namespace {

Matrix matrix_power(const Matrix& A, Eigen::Index k) {
  Matrix out = Matrix::Identity(A.rows(), A.cols());
  for (Eigen::Index i = 0; i < k; ++i) out = out * A;
  return out;
}

// Rowwise z' H z.
Vector quadratic_rows(const Matrix& Z, const Matrix& H) {
  return (Z * H).cwiseProduct(Z).rowwise().sum();
}

constexpr double kSqrt2 = 1.4142135623730951;

}  // namespace

void BlockLayout::validate() const {
  if (N < 1 || m < 1 || p < 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "layout: N, m and p must all be positive");
  }
}

Vector HistoryWindow::stacked() const {
  Vector out(ubar.size() + ybar.size() + r_lag.size());
  out << ubar, ybar, r_lag;
  return out;
}

HistoryWindow history_at(const IoDataset& data, std::size_t t, Eigen::Index N) {
  const auto tt = static_cast<Eigen::Index>(t);
  if (tt < N || tt > static_cast<Eigen::Index>(data.size())) {
    throw Error(ErrorKind::kInvalidArgument,
                "history_at: need N past samples before t");
  }
  const Eigen::Index m = data.m();
  const Eigen::Index p = data.p();
  HistoryWindow hist{Vector(N * m), Vector(N * p), data.r.col(tt - N)};
  for (Eigen::Index k = 0; k < N; ++k) {
    hist.ubar.segment(k * m, m) = data.u.col(tt - 1 - k);
    hist.ybar.segment(k * p, p) = data.y.col(tt - 1 - k);
  }
  return hist;
}

Vector make_zbar(const HistoryWindow& hist, const Vector& u) {
  Vector z(hist.ubar.size() + hist.ybar.size() + hist.r_lag.size() + u.size());
  z << hist.ubar, hist.ybar, hist.r_lag, u;
  return z;
}

Vector kron_row(const Vector& z) {
  const Eigen::Index d = z.size();
  Vector out(d * d);
  // vec(H)[a + b d] = H(a, b) pairs with z_a z_b.
  for (Eigen::Index b = 0; b < d; ++b) out.segment(b * d, d) = z * z(b);
  return out;
}

Matrix pseudo_inverse(const Matrix& W) {
  if (W.rows() < W.cols() || matrix_rank(W) < W.cols()) {
    throw Error(ErrorKind::kSingular,
                "pseudo_inverse: matrix does not have full column rank");
  }
  const Matrix gram = W.transpose() * W;
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::kSingular, "pseudo_inverse: W'W is not invertible");
  }
  return llt.solve(W.transpose());
}

ReconstructionMatrices build_reconstruction_matrices(
    const StateSpaceModel& model, const ReferenceGenerator& gen,
    Eigen::Index N) {
  const Eigen::Index n = model.n();
  const Eigen::Index m = model.m();
  const Eigen::Index p = model.p();
  require_dim(gen.p(), p, "reconstruction: reference");
  if (N < n) {
    throw Error(ErrorKind::kInvalidArgument,
                "reconstruction: horizon N must be at least the state dimension");
  }
  const Matrix& A = model.A();
  const Matrix& B = model.B();
  const Matrix& C = model.C();

  std::vector<Matrix> powers(static_cast<std::size_t>(N) + 1);
  powers[0] = Matrix::Identity(n, n);
  for (Eigen::Index k = 1; k <= N; ++k) {
    powers[static_cast<std::size_t>(k)] = powers[static_cast<std::size_t>(k) - 1] * A;
  }
  auto Ak = [&](Eigen::Index k) -> const Matrix& {
    return powers[static_cast<std::size_t>(k)];
  };

  ReconstructionMatrices rm;
  rm.U_N.resize(n, N * m);
  rm.W_N.resize(N * p, n);
  rm.D_N = Matrix::Zero(N * p, N * m);
  // Same recurrences as the controllability and observability matrices, so
  // N = n reproduces them bit for bit.
  Matrix ub = B;
  Matrix cw = C;
  for (Eigen::Index k = 0; k < N; ++k) {
    rm.U_N.middleCols(k * m, m) = ub;
    rm.W_N.middleRows((N - 1 - k) * p, p) = cw;
    ub = A * ub;
    cw = cw * A;
  }
  // y(t-1-i) depends on u(t-1-k) for k > i through C A^{k-i-1} B.
  for (Eigen::Index i = 0; i < N; ++i) {
    for (Eigen::Index k = i + 1; k < N; ++k) {
      rm.D_N.block(i * p, k * m, p, m) = C * Ak(k - i - 1) * B;
    }
  }
  if (matrix_rank(rm.W_N) < n) {
    throw Error(ErrorKind::kSingular,
                "reconstruction: W_N is rank deficient (model not observable "
                "within N steps)");
  }
  const Matrix w_pinv = pseudo_inverse(rm.W_N);
  const Matrix AN_w = Ak(N) * w_pinv;

  rm.M = Matrix::Zero(n + p, N * m + N * p + p);
  rm.M.block(0, 0, n, N * m) = rm.U_N - AN_w * rm.D_N;
  rm.M.block(0, N * m, n, N * p) = AN_w;
  rm.M.block(n, N * (m + p), p, p) = matrix_power(gen.F, N);
  return rm;
}

Matrix KernelMatrix::uu() const {
  const Eigen::Index off = layout.u_offset();
  return H.block(off, off, layout.m, layout.m);
}

Matrix KernelMatrix::u_history() const {
  return H.block(layout.u_offset(), 0, layout.m, layout.history_dim());
}

void KernelMatrix::validate() const {
  layout.validate();
  require_dim(H.rows(), layout.d(), "kernel rows");
  require_dim(H.cols(), layout.d(), "kernel columns");
  if (!H.allFinite()) {
    throw Error(ErrorKind::kInvalidArgument, "kernel: non-finite entries");
  }
  if ((H - H.transpose()).norm() > 1e-10 * std::max(1.0, H.norm())) {
    throw Error(ErrorKind::kInvalidArgument, "kernel: matrix is not symmetric");
  }
}

Matrix augmented_kernel(const AugmentedSystem& aug, const Matrix& R,
                        double gamma, const Matrix& P) {
  const Eigen::Index nx = aug.T.rows();
  const Eigen::Index m = aug.B1.cols();
  Matrix H(nx + m, nx + m);
  H.topLeftCorner(nx, nx) = aug.Q1 + gamma * aug.T.transpose() * P * aug.T;
  H.topRightCorner(nx, m) = gamma * aug.T.transpose() * P * aug.B1;
  H.bottomLeftCorner(m, nx) = H.topRightCorner(nx, m).transpose();
  H.bottomRightCorner(m, m) = R + gamma * aug.B1.transpose() * P * aug.B1;
  return 0.5 * (H + H.transpose());
}

KernelMatrix kernel_direct(const StateSpaceModel& model,
                           const ReferenceGenerator& gen, const CostWeights& w,
                           const Matrix& P, Eigen::Index N) {
  const AugmentedSystem aug = augment(model, gen, w);
  require_dim(P.rows(), aug.T.rows(), "kernel_direct: P");
  const ReconstructionMatrices rm = build_reconstruction_matrices(model, gen, N);
  const Matrix H = augmented_kernel(aug, w.R, w.gamma, P);

  const BlockLayout layout{N, model.m(), model.p()};
  const Eigen::Index hd = layout.history_dim();
  const Eigen::Index nx = aug.T.rows();
  const Eigen::Index m = model.m();
  Matrix G = Matrix::Zero(nx + m, layout.d());
  G.topLeftCorner(nx, hd) = rm.M;
  G.bottomRightCorner(m, m) = Matrix::Identity(m, m);

  KernelMatrix out{G.transpose() * H * G, layout};
  out.H = 0.5 * (out.H + out.H.transpose());
  return out;
}

Matrix policy_gain(const KernelMatrix& kernel) {
  const Matrix huu = kernel.uu();
  Eigen::JacobiSVD<Matrix> svd(huu, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s(0);
  const double smin = s(s.size() - 1);
  if (!(smax > 0.0) || smin <= kRankTolerance * smax || !huu.allFinite()) {
    std::ostringstream os;
    os << "policy: H_uu is singular (condition number "
       << (smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity())
       << ")";
    throw Error(ErrorKind::kSingular, os.str());
  }
  return -svd.solve(kernel.u_history());
}

Vector policy_from_kernel(const KernelMatrix& kernel, const HistoryWindow& hist) {
  const BlockLayout& l = kernel.layout;
  require_dim(hist.ubar.size(), l.N * l.m, "policy: ubar");
  require_dim(hist.ybar.size(), l.N * l.p, "policy: ybar");
  require_dim(hist.r_lag.size(), l.p, "policy: r_lag");
  return policy_gain(kernel) * hist.stacked();
}

NormalEquations::NormalEquations(const IoDataset& data, Eigen::Index N,
                                 double mu)
    : layout_{N, data.m(), data.p()} {
  layout_.validate();
  data.validate();
  if (!(mu > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "training: mu must be positive");
  }
  const Eigen::Index d = layout_.d();
  const Eigen::Index hd = layout_.history_dim();
  const Eigen::Index m = layout_.m;
  const auto samples = static_cast<Eigen::Index>(data.size());
  const Eigen::Index rows = samples - N - 1;
  if (rows < 1 || static_cast<double>(rows) < 0.5 * static_cast<double>(d * d)) {
    std::ostringstream os;
    os << "training: " << std::max<Eigen::Index>(rows, 0)
       << " usable samples; at least d^2/2 = " << d * d / 2
       << " are required for d = " << d;
    throw Error(ErrorKind::kInvalidArgument, os.str());
  }

  z_.resize(rows, d);
  next_hist_.resize(rows, hd);
  err_.resize(rows, layout_.p);
  u_.resize(rows, m);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto t = static_cast<std::size_t>(N + i);
    z_.row(i) = make_zbar(history_at(data, t, N), data.u.col(N + i)).transpose();
    next_hist_.row(i) = history_at(data, t + 1, N).stacked().transpose();
    err_.row(i) = (data.y.col(N + i) - data.r.col(N + i)).transpose();
    u_.row(i) = data.u.col(N + i).transpose();
  }

  Eigen::BDCSVD<Matrix> svd(z_, Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  Eigen::Index k = 0;
  while (k < s.size() && s(k) > kRankTolerance * s(0)) ++k;
  if (k == 0) {
    throw Error(ErrorKind::kSingular, "training: regressors are identically zero");
  }
  basis_ = svd.matrixV().leftCols(k);
  w_ = z_ * basis_;

  // Orthonormal symmetric features of w = V'z: w_a^2 and sqrt(2) w_a w_b.
  const Eigen::Index f = k * (k + 1) / 2;
  Matrix gram = Matrix::Zero(f, f);
  const Eigen::Index chunk = 1024;
  for (Eigen::Index start = 0; start < rows; start += chunk) {
    const Eigen::Index len = std::min(chunk, rows - start);
    const auto w = w_.middleRows(start, len);
    Matrix phi(f, len);
    Eigen::Index idx = 0;
    for (Eigen::Index b = 0; b < k; ++b) {
      phi.row(idx++) = w.col(b).cwiseAbs2().transpose();
      for (Eigen::Index a = b + 1; a < k; ++a) {
        phi.row(idx++) = kSqrt2 * w.col(a).cwiseProduct(w.col(b)).transpose();
      }
    }
    gram.selfadjointView<Eigen::Lower>().rankUpdate(phi);
  }
  gram = gram.selfadjointView<Eigen::Lower>();

  // Cholesky with jitter escalation x10 up to 1e2 mu.
  for (double lambda = mu; lambda <= 1e2 * mu * (1 + 1e-12); lambda *= 10.0) {
    Matrix reg = gram;
    reg.diagonal().array() += lambda;
    chol_.compute(reg);
    if (chol_.info() == Eigen::Success) {
      mu_used_ = lambda;
      return;
    }
  }
  throw Error(ErrorKind::kSingular,
              "training: Cholesky of L + mu I failed after jitter escalation; "
              "the data are not persistently exciting");
}

Matrix NormalEquations::solve_reduced(const Vector& targets) const {
  require_dim(targets.size(), z_.rows(), "normal equations: targets");
  const Eigen::Index k = basis_.cols();
  // Right-hand side in feature coordinates: sum_t c(t) phi(w(t)).
  const Matrix Sw = w_.transpose() * targets.asDiagonal() * w_;

  Vector rhs(k * (k + 1) / 2);
  Eigen::Index idx = 0;
  for (Eigen::Index b = 0; b < k; ++b) {
    rhs(idx++) = Sw(b, b);
    for (Eigen::Index a = b + 1; a < k; ++a) rhs(idx++) = kSqrt2 * Sw(a, b);
  }
  const Vector h = chol_.solve(rhs);

  Matrix Hw(k, k);
  idx = 0;
  for (Eigen::Index b = 0; b < k; ++b) {
    Hw(b, b) = h(idx++);
    for (Eigen::Index a = b + 1; a < k; ++a) {
      Hw(a, b) = Hw(b, a) = h(idx++) / kSqrt2;
    }
  }
  return Hw;
}

Matrix NormalEquations::solve(const Vector& targets) const {
  Matrix H = basis_ * solve_reduced(targets) * basis_.transpose();
  return 0.5 * (H + H.transpose());
}

TrainingResult value_iteration(const IoDataset& data, const TrainingConfig& cfg,
                               const CostWeights& w) {
  const NormalEquations eqs(data, cfg.N, cfg.mu);
  return value_iteration(eqs, cfg, w);
}

TrainingResult value_iteration(const NormalEquations& eqs,
                               const TrainingConfig& cfg, const CostWeights& w) {
  const BlockLayout& layout = eqs.layout();
  require_dim(w.Q.rows(), layout.p, "training: Q");
  require_dim(w.R.rows(), layout.m, "training: R");
  if (!(cfg.eps > 0.0) || cfg.max_iters < 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "training: eps and max_iters must be positive");
  }
  const Eigen::Index d = layout.d();
  const Eigen::Index hd = layout.history_dim();

  // Stage cost (y - r)'Q(y - r) + u'Ru per sample; fixed across iterations.
  const Vector stage = quadratic_rows(eqs.tracking_error(), w.Q) +
                       quadratic_rows(eqs.inputs(), w.R);

  TrainingResult result;
  result.kernel.layout = layout;
  result.kernel.H = cfg.H0 ? *cfg.H0 : Matrix::Identity(d, d);
  result.kernel.validate();
  result.excitation_rank = eqs.excitation_rank();
  result.regularization = eqs.regularization();

  const Matrix& V = eqs.basis();
  const Matrix V_u = V.bottomRows(layout.m);
  const Matrix w_next_hist = eqs.next_history() * V.topRows(hd);
  // Once H = V H_w V', every quadratic form needs only the reduced
  // coordinates; the initial kernel may lie outside that span.
  std::optional<Matrix> Hw;
  double best_residual = std::numeric_limits<double>::infinity();
  Matrix best = result.kernel.H;

  for (int it = 1; it <= cfg.max_iters; ++it) {
    // Bellman target with the input the current kernel would choose at t+1.
    const Matrix G = policy_gain(result.kernel);
    Vector next_value;
    if (Hw) {
      const Matrix w_next =
          w_next_hist + (eqs.next_history() * G.transpose()) * V_u;
      next_value = quadratic_rows(w_next, *Hw);
    } else {
      Matrix z_next(eqs.rows(), d);
      z_next.leftCols(hd) = eqs.next_history();
      z_next.rightCols(layout.m) = eqs.next_history() * G.transpose();
      next_value = quadratic_rows(z_next, result.kernel.H);
    }
    const Vector targets = stage + w.gamma * next_value;

    Matrix hw_next = eqs.solve_reduced(targets);
    Matrix next = V * hw_next * V.transpose();
    next = 0.5 * (next + next.transpose());
    if (!next.allFinite()) {
      throw Error(ErrorKind::kDiverged, "training: kernel became non-finite");
    }
    const double delta = (next - result.kernel.H).norm();
    const double residual =
        (quadratic_rows(eqs.reduced(), hw_next) - targets).cwiseAbs().mean();
    result.kernel.H = std::move(next);
    Hw = std::move(hw_next);
    result.iterations = it;
    result.final_delta = delta;
    result.delta_history.push_back(delta);
    result.residual_history.push_back(residual);
    if (residual < best_residual) {
      best_residual = residual;
      best = result.kernel.H;
    }
    if (delta <= cfg.eps) {
      result.converged = true;
      return result;
    }
  }
  result.kernel.H = best;
  return result;
}

SimulationTrace run_data_driven_closed_loop(Plant& plant,
                                            const KernelMatrix& kernel,
                                            const ReferenceGenerator& gen,
                                            const CostWeights& w,
                                            std::size_t steps,
                                            const Matrix& warmup) {
  kernel.validate();
  const BlockLayout& l = kernel.layout;
  require_dim(plant.input_dim(), l.m, "closed loop: plant inputs");
  require_dim(plant.output_dim(), l.p, "closed loop: plant outputs");
  require_dim(gen.p(), l.p, "closed loop: reference");
  if (warmup.size() != 0) {
    require_dim(warmup.rows(), l.m, "closed loop: warmup rows");
    require_dim(warmup.cols(), l.N, "closed loop: warmup columns");
  }
  const auto N = static_cast<std::size_t>(l.N);
  const Matrix G = policy_gain(kernel);

  SimulationTrace trace(w.gamma);
  std::vector<Vector> us;
  std::vector<Vector> ys;
  std::vector<Vector> rs;
  Vector r = gen.r0;
  Vector hist(l.history_dim());

  for (std::size_t t = 0; t < steps; ++t) {
    const Vector y = plant.measure();
    Vector u;
    if (t < N) {
      u = warmup.size() != 0 ? Vector(warmup.col(static_cast<Eigen::Index>(t)))
                             : Vector::Zero(l.m);
    } else {
      for (Eigen::Index k = 0; k < l.N; ++k) {
        hist.segment(l.ubar_offset() + k * l.m, l.m) = us[t - 1 - k];
        hist.segment(l.ybar_offset() + k * l.p, l.p) = ys[t - 1 - k];
      }
      hist.segment(l.r_offset(), l.p) = rs[t - N];
      u = G * hist;
    }
    TraceRecord rec;
    rec.y = y;
    rec.u = u;
    rec.r = r;
    rec.cost = stage_cost(w, y, r, u);
    if (!std::isfinite(rec.cost) || y.cwiseAbs().maxCoeff() > 1e9) {
      std::ostringstream os;
      os << "closed loop: output diverged at t=" << t;
      throw Error(ErrorKind::kDiverged, os.str());
    }
    trace.append(std::move(rec));
    us.push_back(u);
    ys.push_back(y);
    rs.push_back(r);
    plant.apply(u);
    r = reference_step(gen, r);
  }
  trace.set_final_output(plant.measure());
  return trace;
}

}  // namespace lqt

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

#include "lqt/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lqt {

void ProbingNoiseConfig::validate() const {
  if (!(sigma > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "probing noise: sigma must be > 0");
  }
  if (!(bandwidth > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "probing noise: bandwidth must be > 0");
  }
  bool ladder = amplitudes.size() == 10;
  for (std::size_t k = 0; ladder && k < amplitudes.size(); ++k) {
    ladder = amplitudes[k] == 100.0 - 10.0 * static_cast<double>(k);
  }
  if (!ladder) {
    throw Error(ErrorKind::kInvalidArgument,
                "probing noise: amplitudes must be the ladder 100, 90, ..., 10");
  }
}

ProbingNoise::ProbingNoise(const ProbingNoiseConfig& cfg, Eigen::Index m)
    : cfg_(cfg), m_(m), rng_(cfg.seed) {
  cfg_.validate();
  const auto terms = static_cast<Eigen::Index>(cfg_.amplitudes.size()) - 1;
  freqs_.resize(terms, m_);
  std::uniform_real_distribution<double> uniform(0.0, cfg_.bandwidth);
  for (Eigen::Index k = 0; k < terms; ++k) {
    for (Eigen::Index i = 0; i < m_; ++i) freqs_(k, i) = uniform(rng_);
  }
}

Vector ProbingNoise::deterministic_part(std::size_t t) const {
  const double tt = static_cast<double>(t);
  Vector w = Vector::Constant(m_, cfg_.amplitudes[0] * std::sin(cfg_.omega2 * tt));
  for (Eigen::Index k = 0; k < freqs_.rows(); ++k) {
    const double a = cfg_.amplitudes[static_cast<std::size_t>(k) + 1];
    for (Eigen::Index i = 0; i < m_; ++i) w(i) += a * std::sin(freqs_(k, i) * tt);
  }
  return w;
}

Vector ProbingNoise::sample(std::size_t t) {
  std::normal_distribution<double> normal(0.0, std::sqrt(cfg_.sigma));
  Vector w(m_);
  for (Eigen::Index i = 0; i < m_; ++i) w(i) = normal(rng_);
  return w + deterministic_part(t);
}

Matrix discrete_lqr_gain(const StateSpaceModel& model, const Matrix& Q,
                         const Matrix& R, double tolerance,
                         int max_iterations) {
  require_dim(Q.rows(), model.n(), "lqr: Q");
  require_dim(R.rows(), model.m(), "lqr: R");
  if (!is_controllable(model)) {
    throw Error(ErrorKind::kInvalidArgument, "lqr: model is not controllable");
  }
  const Matrix& A = model.A();
  const Matrix& B = model.B();
  Matrix P = Q;
  for (int it = 0; it < max_iterations; ++it) {
    const Matrix K = (R + B.transpose() * P * B).ldlt().solve(B.transpose() * P * A);
    Matrix next = Q + A.transpose() * P * (A - B * K);
    next = 0.5 * (next + next.transpose());
    const double delta = (next - P).norm();
    P = std::move(next);
    if (!P.allFinite()) break;
    if (delta <= tolerance * std::max(1.0, P.norm())) {
      return (R + B.transpose() * P * B).ldlt().solve(B.transpose() * P * A);
    }
  }
  throw Error(ErrorKind::kNotConverged,
              "lqr: Riccati iteration did not converge");
}

void IoDataset::validate() const {
  if (y.cols() != u.cols() || r.cols() != u.cols()) {
    throw Error(ErrorKind::kDimension, "dataset: sequence lengths differ");
  }
  if (!u.allFinite() || !y.allFinite() || !r.allFinite()) {
    throw Error(ErrorKind::kInvalidArgument, "dataset: non-finite sample");
  }
}

IoDataset generate_dataset(const StateSpaceModel& model, const Matrix& K,
                           const ProbingNoiseConfig& cfg,
                           const ReferenceGenerator& gen, std::size_t M,
                           const Vector& x0, const DatasetOptions& options) {
  require_dim(K.rows(), model.m(), "dataset: gain rows");
  require_dim(K.cols(), model.n(), "dataset: gain columns");
  require_dim(x0.size(), model.n(), "dataset: initial state");
  require_dim(gen.p(), model.p(), "dataset: reference");
  if (options.verify_gain) {
    const double rho = spectral_radius(model.A() - model.B() * K);
    if (!(rho < 1.0)) {
      std::ostringstream os;
      os << "dataset: feedback gain is not stabilizing (spectral radius "
         << rho << ")";
      throw Error(ErrorKind::kUnstable, os.str());
    }
  }

  ProbingNoise noise(cfg, model.m());
  const auto cols = static_cast<Eigen::Index>(M);
  IoDataset data{Matrix(model.m(), cols), Matrix(model.p(), cols),
                 Matrix(model.p(), cols)};
  Vector x = x0;
  Vector r = gen.r0;
  for (std::size_t t = 0; t < M; ++t) {
    const auto c = static_cast<Eigen::Index>(t);
    const Vector y = model.C() * x;
    const double peak = y.allFinite() ? y.cwiseAbs().maxCoeff()
                                      : std::numeric_limits<double>::infinity();
    if (peak > options.divergence) {
      std::ostringstream os;
      os << "dataset: output diverged at t=" << t
         << "; recheck that the feedback gain stabilizes the plant";
      throw Error(ErrorKind::kDiverged, os.str());
    }
    if (peak > options.envelope) {
      std::ostringstream os;
      os << "dataset: |y| = " << peak << " left the envelope "
         << options.envelope << " at t=" << t
         << "; recheck the feedback gain or the noise amplitudes";
      throw Error(ErrorKind::kDiverged, os.str());
    }
    const Vector u = -K * x + noise.sample(t);
    data.u.col(c) = u;
    data.y.col(c) = y;
    data.r.col(c) = r;
    x = step(model, x, u);
    r = reference_step(gen, r);
  }
  data.validate();
  return data;
}

}  // namespace lqt

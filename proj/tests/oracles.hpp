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

// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls the library routine it is meant to check.

#include <cmath>
#include <cstdint>
#include <random>

#include "lqt/statespace.hpp"

namespace lqt::oracle {

/// Scalar discrete Riccati iteration for x+ = a x + b u, cost q x^2 + r u^2
/// discounted by gamma. Returns {p, k}.
inline std::pair<double, double> scalar_riccati(double a, double b, double q,
                                                double r, double gamma) {
  double p = 0.0;
  for (int i = 0; i < 1000000; ++i) {
    const double k = gamma * b * p * a / (r + gamma * b * b * p);
    const double next = q + r * k * k + gamma * (a - b * k) * (a - b * k) * p;
    if (std::abs(next - p) < 1e-15 * std::max(1.0, p)) {
      p = next;
      break;
    }
    p = next;
  }
  return {p, gamma * b * p * a / (r + gamma * b * b * p)};
}

/// Random 2-state / 1-input / 1-output system with spectral radius in
/// [0.5, 0.95], controllable and observable.
inline StateSpaceModel random_siso(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (;;) {
    Matrix A(2, 2), B(2, 1), C(1, 2);
    for (Eigen::Index i = 0; i < 4; ++i) A.data()[i] = normal(rng);
    for (Eigen::Index i = 0; i < 2; ++i) B(i) = normal(rng);
    for (Eigen::Index i = 0; i < 2; ++i) C(i) = normal(rng);
    const double rho = A.eigenvalues().cwiseAbs().maxCoeff();
    std::uniform_real_distribution<double> target(0.5, 0.95);
    A *= target(rng) / rho;
    StateSpaceModel model(A, B, C);
    Matrix ctrb(2, 2), obsv(2, 2);
    ctrb << B, A * B;
    obsv << C, C * A;
    if (std::abs(ctrb.determinant()) > 0.1 && std::abs(obsv.determinant()) > 0.1) {
      return model;
    }
  }
}

/// Full d^2 regularized normal equations: (sum k k' + mu I) vec(H) =
/// sum c k with k = z (x) z built by explicit double loops.
inline Matrix full_kron_solve(const Matrix& Z, const Vector& c, double mu) {
  const Eigen::Index d = Z.cols();
  const Eigen::Index d2 = d * d;
  Matrix L = Matrix::Zero(d2, d2);
  Vector rhs = Vector::Zero(d2);
  Vector k(d2);
  for (Eigen::Index t = 0; t < Z.rows(); ++t) {
    for (Eigen::Index b = 0; b < d; ++b) {
      for (Eigen::Index a = 0; a < d; ++a) k(a + b * d) = Z(t, a) * Z(t, b);
    }
    L.noalias() += k * k.transpose();
    rhs += c(t) * k;
  }
  L.diagonal().array() += mu;
  const Vector h = L.ldlt().solve(rhs);
  Matrix H = Eigen::Map<const Matrix>(h.data(), d, d);
  return 0.5 * (H + H.transpose());
}

}  // namespace lqt::oracle

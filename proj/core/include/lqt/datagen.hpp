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
#include <random>
#include <vector>

#include "lqt/statespace.hpp"

namespace lqt {

struct ProbingNoiseConfig {
  double sigma = 1.5;  ///< Gaussian term has standard deviation sqrt(sigma)
  std::vector<double> amplitudes = {100, 90, 80, 70, 60, 50, 40, 30, 20, 10};
  double omega2 = 16.5;    ///< frequency of the leading sinusoid
  double bandwidth = 1.65; ///< upper bound of the frozen uniform frequencies
  std::uint64_t seed = 1;

  /// Throws kInvalidArgument unless the ladder steps down by 10 from 100 to
  /// 10 and sigma, bandwidth are positive.
  void validate() const;
};

/// w(t) = w1(t) + a1 sin(omega2 t) + sum_k a_k sin(omega_k t), elementwise.
/// w1 is redrawn every call to sample(); omega_3.. are drawn once at
/// construction from U(0, bandwidth) per input channel.
class ProbingNoise {
 public:
  ProbingNoise(const ProbingNoiseConfig& cfg, Eigen::Index m);

  /// Sinusoidal part only.
  Vector deterministic_part(std::size_t t) const;

  /// Gaussian draw plus the sinusoidal part. Consumes RNG state, so calls
  /// must be made in time order for reproducibility.
  Vector sample(std::size_t t);

  /// frequencies()(k, i): frequency of the (k+2)-th ladder term on input i.
  const Matrix& frequencies() const { return freqs_; }

 private:
  ProbingNoiseConfig cfg_;
  Eigen::Index m_;
  Matrix freqs_;
  std::mt19937_64 rng_;
};

/// Infinite-horizon discrete LQR gain for x+ = Ax + Bu by Riccati value
/// iteration. Throws kInvalidArgument for an uncontrollable model and
/// kNotConverged when the sweep budget runs out.
Matrix discrete_lqr_gain(const StateSpaceModel& model, const Matrix& Q,
                         const Matrix& R, double tolerance = 1e-12,
                         int max_iterations = 200000);

/// Input-output record. Column t of u, y, r holds the sample at time t.
struct IoDataset {
  Matrix u;
  Matrix y;
  Matrix r;

  std::size_t size() const { return static_cast<std::size_t>(u.cols()); }
  Eigen::Index m() const { return u.rows(); }
  Eigen::Index p() const { return y.rows(); }

  /// Throws unless lengths agree and every sample is finite.
  void validate() const;
};

struct DatasetOptions {
  double envelope = 1e6;    ///< |y| above this is rejected as unusable data
  double divergence = 1e9;  ///< |y| above this is reported as divergence
  bool verify_gain = true;  ///< require rho(A - B K) < 1 before simulating
};

/// Simulates u(t) = -K x(t) + w(t) from x0 for M steps.
IoDataset generate_dataset(const StateSpaceModel& model, const Matrix& K,
                           const ProbingNoiseConfig& cfg,
                           const ReferenceGenerator& gen, std::size_t M,
                           const Vector& x0, const DatasetOptions& options = {});

}  // namespace lqt

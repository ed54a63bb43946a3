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
#include <functional>
#include <random>
#include <vector>

#include "lqt/statespace.hpp"

namespace lqt {

/// Fitness assigned to parameter points whose controller diverges or fails.
inline constexpr double kDivergencePenalty = 1e12;

/// Box bounds for theta = {q_1..q_p, r_1..r_m}.
struct SearchDomain {
  Vector lower;
  Vector upper;

  Eigen::Index dim() const { return lower.size(); }
  bool contains(const Vector& x) const;
  /// Throws unless 0 < lower < upper elementwise.
  void validate() const;

  /// Q entries in [q_lo, q_hi] followed by R entries in [r_lo, r_hi].
  static SearchDomain weights(Eigen::Index p, Eigen::Index m, double q_lo,
                              double q_hi, double r_lo, double r_hi);
  /// Q in [0.01, 1], R in [0.01, 0.4].
  static SearchDomain observer_preset(Eigen::Index p, Eigen::Index m);
  /// Same upper limits with 0.1 as the lower bound for both.
  static SearchDomain datadriven_preset(Eigen::Index p, Eigen::Index m);
};

/// exp(-||a - b||^2)
double se_kernel(const Vector& a, const Vector& b);

struct Posterior {
  double mean = 0.0;
  double variance = 0.0;
};

/// Zero-mean GP over the evaluated points with the unit SE kernel.
class GpState {
 public:
  void add(const Vector& x, double fitness);

  /// Throws kSingular if the Gram matrix cannot be factorized even after
  /// jitter escalation.
  Posterior posterior(const Vector& x) const;

  std::size_t size() const { return points_.size(); }
  const std::vector<Vector>& points() const { return points_; }
  const std::vector<double>& values() const { return values_; }
  /// Diagonal jitter used by the current factorization.
  double jitter() const { return jitter_; }

 private:
  void refactor();

  std::vector<Vector> points_;
  std::vector<double> values_;
  Eigen::LLT<Matrix> chol_;
  Vector alpha_;
  double jitter_ = 0.0;
};

/// mu(x) - epsilon * k(x); lower is better.
double ucb(const GpState& state, const Vector& x, double epsilon);

struct AcquisitionConfig {
  double epsilon = 2.0;
  int candidate_count = 2048;
  int iterations = 100;
  int init_samples = 50;
  std::uint64_t seed = 7;

  void validate() const;
};

/// count x dim Latin-hypercube sample of the domain, one point per row.
Matrix latin_hypercube(const SearchDomain& domain, int count,
                       std::mt19937_64& rng);

/// Minimizer of the acquisition over a candidate pool seeded by
/// (cfg.seed, iteration).
Vector propose_next(const GpState& state, const AcquisitionConfig& cfg,
                    const SearchDomain& domain, int iteration);

/// Discounted sum of ||y - r||^2 + ||u||^2 over the first `horizon` records.
double fitness(const SimulationTrace& trace, std::size_t horizon);

struct BoSample {
  int iteration = 0;  ///< negative for the initial design
  Vector theta;
  double fitness = 0.0;
  bool penalized = false;
};

struct BoResult {
  Vector theta_best;
  double fitness_best = 0.0;
  std::vector<BoSample> history;
};

/// Maps theta to a fitness value. Exceptions of type lqt::Error and
/// non-finite results become kDivergencePenalty.
using FitnessEvaluator = std::function<double(const Vector&)>;

BoResult optimize(const FitnessEvaluator& evaluator, const SearchDomain& domain,
                  const AcquisitionConfig& cfg);

}  // namespace lqt

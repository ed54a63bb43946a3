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

#include "lqt/bayesopt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace lqt {

bool SearchDomain::contains(const Vector& x) const {
  return x.size() == dim() && (x.array() >= lower.array()).all() &&
         (x.array() <= upper.array()).all();
}

void SearchDomain::validate() const {
  require_dim(upper.size(), lower.size(), "search domain bounds");
  if (lower.size() == 0) {
    throw Error(ErrorKind::kInvalidArgument, "search domain is empty");
  }
  if (!((lower.array() > 0.0).all() && (lower.array() < upper.array()).all())) {
    throw Error(ErrorKind::kInvalidArgument,
                "search domain: need 0 < lower < upper in every coordinate");
  }
}

SearchDomain SearchDomain::weights(Eigen::Index p, Eigen::Index m, double q_lo,
                                   double q_hi, double r_lo, double r_hi) {
  SearchDomain d{Vector(p + m), Vector(p + m)};
  d.lower << Vector::Constant(p, q_lo), Vector::Constant(m, r_lo);
  d.upper << Vector::Constant(p, q_hi), Vector::Constant(m, r_hi);
  d.validate();
  return d;
}

SearchDomain SearchDomain::observer_preset(Eigen::Index p, Eigen::Index m) {
  return weights(p, m, 0.01, 1.0, 0.01, 0.4);
}

SearchDomain SearchDomain::datadriven_preset(Eigen::Index p, Eigen::Index m) {
  return weights(p, m, 0.1, 1.0, 0.1, 0.4);
}

double se_kernel(const Vector& a, const Vector& b) {
  require_dim(a.size(), b.size(), "se_kernel");
  return std::exp(-(a - b).squaredNorm());
}

void GpState::add(const Vector& x, double fitness) {
  if (!points_.empty()) require_dim(x.size(), points_.front().size(), "gp point");
  points_.push_back(x);
  values_.push_back(fitness);
  refactor();
}

void GpState::refactor() {
  const auto l = static_cast<Eigen::Index>(points_.size());
  Matrix gram(l, l);
  for (Eigen::Index i = 0; i < l; ++i) {
    gram(i, i) = 1.0;
    for (Eigen::Index j = 0; j < i; ++j) {
      gram(i, j) = gram(j, i) = se_kernel(points_[static_cast<std::size_t>(i)],
                                          points_[static_cast<std::size_t>(j)]);
    }
  }
  const Vector f = Eigen::Map<const Vector>(values_.data(), l);
  for (double jitter = 1e-10; jitter <= 1e-2; jitter *= 10.0) {
    Matrix reg = gram;
    reg.diagonal().array() += jitter;
    chol_.compute(reg);
    if (chol_.info() == Eigen::Success) {
      jitter_ = jitter;
      alpha_ = chol_.solve(f);
      return;
    }
  }
  throw Error(ErrorKind::kSingular,
              "gp: Gram matrix is singular after jitter escalation");
}

Posterior GpState::posterior(const Vector& x) const {
  if (points_.empty()) return {0.0, 1.0};
  const auto l = static_cast<Eigen::Index>(points_.size());
  Vector k(l);
  for (Eigen::Index i = 0; i < l; ++i) {
    k(i) = se_kernel(x, points_[static_cast<std::size_t>(i)]);
  }
  Posterior post;
  post.mean = k.dot(alpha_);
  const Vector v = chol_.matrixL().solve(k);
  post.variance = std::max(0.0, 1.0 - v.squaredNorm());
  return post;
}

double ucb(const GpState& state, const Vector& x, double epsilon) {
  const Posterior post = state.posterior(x);
  return post.mean - epsilon * post.variance;
}

void AcquisitionConfig::validate() const {
  if (epsilon < 0.0 || candidate_count < 1 || iterations < 0 ||
      init_samples < 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "acquisition: need epsilon >= 0, candidate_count >= 1, "
                "iterations >= 0, init_samples >= 1");
  }
}

Matrix latin_hypercube(const SearchDomain& domain, int count,
                       std::mt19937_64& rng) {
  const Eigen::Index dim = domain.dim();
  Matrix pool(count, dim);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<int> strata(static_cast<std::size_t>(count));
  for (Eigen::Index j = 0; j < dim; ++j) {
    std::iota(strata.begin(), strata.end(), 0);
    std::shuffle(strata.begin(), strata.end(), rng);
    const double span = domain.upper(j) - domain.lower(j);
    for (int i = 0; i < count; ++i) {
      const double u = (strata[static_cast<std::size_t>(i)] + unit(rng)) / count;
      pool(i, j) = domain.lower(j) + span * u;
    }
  }
  return pool;
}

Vector propose_next(const GpState& state, const AcquisitionConfig& cfg,
                    const SearchDomain& domain, int iteration) {
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed),
                    static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(iteration), 0x5eedu};
  std::mt19937_64 rng(seq);
  const Matrix pool = latin_hypercube(domain, cfg.candidate_count, rng);
  Eigen::Index best = 0;
  double best_score = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < pool.rows(); ++i) {
    const double score = ucb(state, pool.row(i).transpose(), cfg.epsilon);
    if (score < best_score) {
      best_score = score;
      best = i;
    }
  }
  return pool.row(best).transpose();
}

double fitness(const SimulationTrace& trace, std::size_t horizon) {
  if (horizon > trace.size()) {
    throw Error(ErrorKind::kInvalidArgument, "fitness: horizon exceeds trace");
  }
  double total = 0.0;
  double discount = 1.0;
  for (std::size_t t = 0; t < horizon; ++t) {
    const TraceRecord& rec = trace.records()[t];
    total += discount * ((rec.y - rec.r).squaredNorm() + rec.u.squaredNorm());
    discount *= trace.gamma();
  }
  return total;
}

namespace {

BoSample evaluate(const FitnessEvaluator& evaluator, const Vector& theta,
                  int iteration) {
  BoSample s{iteration, theta, kDivergencePenalty, true};
  try {
    const double f = evaluator(theta);
    if (std::isfinite(f)) {
      s.fitness = std::min(f, kDivergencePenalty);
      s.penalized = f >= kDivergencePenalty;
    }
  } catch (const Error&) {
    // Divergent or failed controller; keep the penalty.
  }
  return s;
}

}  // namespace

BoResult optimize(const FitnessEvaluator& evaluator, const SearchDomain& domain,
                  const AcquisitionConfig& cfg) {
  domain.validate();
  cfg.validate();

  BoResult result;
  GpState gp;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < cfg.init_samples; ++i) {
    Vector theta(domain.dim());
    for (Eigen::Index j = 0; j < domain.dim(); ++j) {
      theta(j) = domain.lower(j) + (domain.upper(j) - domain.lower(j)) * unit(rng);
    }
    BoSample s = evaluate(evaluator, theta, -(i + 1));
    gp.add(s.theta, s.fitness);
    result.history.push_back(std::move(s));
  }
  for (int it = 0; it < cfg.iterations; ++it) {
    const Vector theta = propose_next(gp, cfg, domain, it);
    BoSample s = evaluate(evaluator, theta, it);
    gp.add(s.theta, s.fitness);
    result.history.push_back(std::move(s));
  }

  // Best point: smallest posterior mean among the evaluated points.
  double best_mean = std::numeric_limits<double>::infinity();
  for (const BoSample& s : result.history) {
    const double mean = gp.posterior(s.theta).mean;
    if (mean < best_mean) {
      best_mean = mean;
      result.theta_best = s.theta;
      result.fitness_best = s.fitness;
    }
  }
  return result;
}

}  // namespace lqt

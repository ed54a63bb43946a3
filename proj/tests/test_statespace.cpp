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

#include <gtest/gtest.h>

#include <random>

#include "lqt/fixtures.hpp"
#include "lqt/statespace.hpp"

namespace lqt {
namespace {

Matrix m1(double v) { return Matrix::Constant(1, 1, v); }
Vector v1(double v) { return Vector::Constant(1, v); }

TEST(StateSpace, StepIdentityTransition) {
  StateSpaceModel model(Matrix::Identity(2, 2), Matrix::Zero(2, 1),
                        Matrix::Identity(2, 2));
  Vector x(2);
  x << 1, 2;
  EXPECT_EQ(step(model, x, v1(7.0)), x);
  EXPECT_EQ(step(model, Vector::Zero(2), Vector::Zero(1)), Vector::Zero(2));
  EXPECT_EQ(output(model, x), x);
}

TEST(StateSpace, StepExtruderFirstRow) {
  const StateSpaceModel model = fixtures::extruder_model();
  const Vector next = step(model, Vector::Constant(6, 20.0), Vector::Zero(7));
  EXPECT_NEAR(next(0), 0.992 * 20 + 0.0018 * 20, 1e-12);
  EXPECT_NEAR(next(0), 19.876, 1e-12);
}

TEST(StateSpace, DimensionMismatchThrows) {
  const StateSpaceModel model = fixtures::extruder_model();
  EXPECT_THROW(step(model, Vector::Zero(5), Vector::Zero(7)), Error);
  EXPECT_THROW(step(model, Vector::Zero(6), Vector::Zero(6)), Error);
  EXPECT_THROW(StateSpaceModel(Matrix::Identity(2, 2), Matrix::Zero(3, 1),
                               Matrix::Identity(2, 2)),
               Error);
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 0) = std::nan("");
  EXPECT_THROW(StateSpaceModel(bad, Matrix::Zero(2, 1), Matrix::Identity(2, 2)),
               Error);
}

TEST(StateSpace, ReferenceStep) {
  const ReferenceGenerator gen = fixtures::extruder_reference();
  Vector r(5);
  r << 150, 160, 170, 175, 180;
  EXPECT_EQ(reference_step(gen, r), r);
  EXPECT_EQ(reference_step(ReferenceGenerator(Matrix::Zero(5, 5), r), r),
            Vector::Zero(5));
  EXPECT_EQ(reference_step(ReferenceGenerator(m1(2.0), v1(3.0)), v1(3.0)), v1(6.0));
  EXPECT_THROW(reference_step(gen, Vector::Zero(4)), Error);
}

TEST(StateSpace, StageCost) {
  const CostWeights unit(m1(1.0), m1(1.0), 1.0);
  EXPECT_EQ(stage_cost(unit, v1(4.0), v1(4.0), v1(0.0)), 0.0);
  EXPECT_DOUBLE_EQ(stage_cost(unit, v1(2.0), v1(0.0), v1(3.0)), 13.0);
  const CostWeights w(m1(2.0), m1(0.5), 1.0);
  EXPECT_DOUBLE_EQ(stage_cost(w, v1(1.0), v1(0.0), v1(2.0)), 4.0);
}

TEST(StateSpace, CostWeightsValidation) {
  EXPECT_THROW(CostWeights(m1(0.0), m1(1.0), 0.9), Error);
  EXPECT_THROW(CostWeights(m1(1.0), m1(-1.0), 0.9), Error);
  EXPECT_THROW(CostWeights(m1(1.0), m1(1.0), 0.0), Error);
  EXPECT_THROW(CostWeights(m1(1.0), m1(1.0), 1.5), Error);
  Matrix asym(2, 2);
  asym << 1, 0.5, 0, 1;
  EXPECT_THROW(CostWeights(asym, m1(1.0), 0.9), Error);
  EXPECT_NO_THROW(CostWeights(m1(1.0), m1(1.0), 1.0));
}

SimulationTrace constant_trace(double gamma, double cost, int n) {
  SimulationTrace trace(gamma);
  for (int t = 0; t < n; ++t) {
    TraceRecord rec;
    rec.y = v1(std::sqrt(cost));
    rec.r = v1(0.0);
    rec.u = v1(0.0);
    rec.cost = cost;
    trace.append(rec);
  }
  return trace;
}

TEST(StateSpace, PerformanceIndex) {
  const CostWeights unit(m1(1.0), m1(1.0), 1.0);
  EXPECT_DOUBLE_EQ(performance_index(constant_trace(1.0, 1.0, 3), unit, 3), 3.0);
  EXPECT_EQ(performance_index(constant_trace(1.0, 0.0, 5), unit, 5), 0.0);
  EXPECT_THROW(performance_index(constant_trace(1.0, 1.0, 3), unit, 4), Error);

  const CostWeights disc(m1(1.0), m1(1.0), 0.9);
  const SimulationTrace tr = constant_trace(0.9, 2.0, 20);
  double prev = 0.0;
  for (std::size_t h = 0; h <= 20; ++h) {
    const double j = performance_index(tr, disc, h);
    EXPECT_GE(j, prev);
    prev = j;
  }
  // Running discounted cost recomputes from the records.
  EXPECT_NEAR(tr.discounted_cost(), 2.0 * (1 - std::pow(0.9, 20)) / 0.1, 1e-9);
  EXPECT_NEAR(tr.discounted_cost(), performance_index(tr, disc, 20), 1e-9);
}

TEST(StateSpace, ControllabilityAndObservability) {
  const StateSpaceModel easy(Matrix::Zero(3, 3), Matrix::Identity(3, 3),
                             Matrix::Identity(3, 3));
  EXPECT_EQ(matrix_rank(controllability_matrix(easy)), 3);
  EXPECT_TRUE(is_controllable(easy));
  EXPECT_TRUE(is_observable(easy));

  const StateSpaceModel dead(Matrix::Identity(3, 3), Matrix::Zero(3, 1),
                             Matrix::Zero(1, 3));
  EXPECT_EQ(matrix_rank(controllability_matrix(dead)), 0);
  EXPECT_FALSE(is_controllable(dead));
  EXPECT_FALSE(is_observable(dead));

  const StateSpaceModel paper = fixtures::extruder_model();
  EXPECT_EQ(controllability_matrix(paper).rows(), 6);
  EXPECT_EQ(controllability_matrix(paper).cols(), 42);
  EXPECT_EQ(observability_matrix(paper).rows(), 30);
  EXPECT_TRUE(is_controllable(paper));
  EXPECT_TRUE(is_observable(paper));
}

TEST(StateSpace, AugmentScalar) {
  const StateSpaceModel model(m1(0.3), m1(2.0), m1(1.0));
  const ReferenceGenerator gen(m1(0.7), v1(1.0));
  const AugmentedSystem aug = augment(model, gen, CostWeights(m1(1.0), m1(1.0), 0.9));
  Matrix T(2, 2);
  T << 0.3, 0, 0, 0.7;
  EXPECT_EQ(aug.T, T);
  EXPECT_EQ(aug.B1(1, 0), 0.0);
}

TEST(StateSpace, AugmentIdentityQ1) {
  const StateSpaceModel model(Matrix::Identity(2, 2), Matrix::Identity(2, 2),
                              Matrix::Identity(2, 2));
  const AugmentedSystem aug =
      augment(model, ReferenceGenerator::constant(Vector::Ones(2)),
              CostWeights(Matrix::Identity(2, 2), Matrix::Identity(2, 2), 1.0));
  Matrix expected(4, 4);
  expected << 1, 0, -1, 0,
              0, 1, 0, -1,
              -1, 0, 1, 0,
              0, -1, 0, 1;
  EXPECT_EQ(aug.Q1, expected);
}

TEST(StateSpace, AugmentExtruderBlocksExact) {
  const StateSpaceModel model = fixtures::extruder_model();
  const ReferenceGenerator gen = fixtures::extruder_reference();
  const CostWeights w = fixtures::observer_tuned_weights();
  const AugmentedSystem aug = augment(model, gen, w);
  const Matrix& C = model.C();
  EXPECT_EQ(aug.T.topLeftCorner(6, 6), model.A());
  EXPECT_EQ(aug.T.bottomRightCorner(5, 5), gen.F);
  EXPECT_TRUE(aug.T.topRightCorner(6, 5).isZero(0));
  EXPECT_TRUE(aug.T.bottomLeftCorner(5, 6).isZero(0));
  EXPECT_EQ(aug.B1.topRows(6), model.B());
  EXPECT_TRUE(aug.B1.bottomRows(5).isZero(0));
  EXPECT_LE((aug.Q1.topLeftCorner(6, 6) - C.transpose() * w.Q * C).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE((aug.Q1.topRightCorner(6, 5) + C.transpose() * w.Q).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE((aug.Q1.bottomLeftCorner(5, 6) + w.Q * C).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_EQ(aug.Q1.bottomRightCorner(5, 5), w.Q);
  EXPECT_EQ(aug.Q1, aug.Q1.transpose());
}

TEST(StateSpace, OutputCostEqualsAugmentedQuadraticForm) {
  // X'Q1X = (y - r)'Q(y - r) with y = Cx, the identity the data-driven
  // targets rely on.
  const StateSpaceModel model = fixtures::extruder_model();
  const CostWeights w = fixtures::datadriven_tuned_weights();
  const AugmentedSystem aug = augment(model, fixtures::extruder_reference(), w);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(0.0, 50.0);
  for (int trial = 0; trial < 20; ++trial) {
    Vector X(11);
    for (Eigen::Index i = 0; i < 11; ++i) X(i) = normal(rng);
    const Vector e = model.C() * X.head(6) - X.tail(5);
    const double lhs = X.dot(aug.Q1 * X);
    EXPECT_NEAR(lhs, e.dot(w.Q * e), 1e-9 * std::max(1.0, std::abs(lhs)));
  }
}

TEST(StateSpace, NumericalHelpers) {
  Matrix m(2, 2);
  m << 0.5, 1, 0, -0.8;
  EXPECT_NEAR(spectral_radius(m), 0.8, 1e-15);
  EXPECT_NEAR(min_symmetric_eigenvalue(Matrix::Identity(3, 3) * 2), 2.0, 1e-15);
  EXPECT_TRUE(all_finite(m));
  Matrix r1(3, 3);
  r1 << 1, 2, 3, 2, 4, 6, 1, 1, 1;
  EXPECT_EQ(matrix_rank(r1), 2);
}

}  // namespace
}  // namespace lqt

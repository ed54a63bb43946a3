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

#include "lqt/fixtures.hpp"

#include <bit>

namespace lqt::fixtures {
namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

class Fnv1a {
 public:
  void add(double x) {
    auto bits = std::bit_cast<std::uint64_t>(x);
    for (int b = 0; b < 8; ++b) {
      hash_ ^= (bits >> (8 * b)) & 0xffu;
      hash_ *= 0x100000001b3ULL;
    }
  }
  void add(const Matrix& m) {
    add(static_cast<double>(m.rows()));
    add(static_cast<double>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) add(m(i, j));
    }
  }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace

StateSpaceModel extruder_model() {
  Matrix A(6, 6);
  A << 0.992, 0.0018, 0, 0, 0, 0,
       0.0023, 0.9919, 0.0043, 0, 0, 0,
       0, -0.0042, 1.0009, 0.0024, 0, 0,
       0, 0, 0.0013, 0.9979, 0, 0,
       0, 0, 0, 0, 0.9972, 0,
       0, 0, 0, 0, 0, 0.9953;
  Matrix B(6, 7);
  B << 1.0033, 0, 0, 0, 0, 0, -0.2175,
       0, 1.0460, 0, 0, 0, 0, -0.0788,
       0, 0, 1.0326, 0, 0, 0, -0.0020,
       0, 0, 0, 0.4798, 0, 0, -0.0669,
       0, 0, 0, 0, 0.8882, 0, 0.1273,
       0, 0, 0, 0, 0, 1.1699, -0.1792;
  Matrix C(5, 6);
  C << 0.992, 0.00018, 0, 0, -0.0001, 0,
       0.0023, 1.3, 0.0043, 0, 0, 0,
       0, -0.0042, 1.0109, 0.0024, 0, 0.201,
       0, 0, 0.0013, 0.989, 0.00031, 0.64,
       0, 0, 0, 0, 0.923, 0.3;
  return StateSpaceModel(A, B, C);
}

ReferenceGenerator extruder_reference() {
  return ReferenceGenerator::constant(vec({150, 160, 170, 175, 180}));
}

Matrix data_gain() {
  Matrix K(7, 6);
  K << 0.7395, -0.0076, -0.0003, -0.0264, 0.0194, -0.0170,
       -0.0076, 0.7430, 0.0031, -0.0093, 0.0068, -0.0060,
       -0.0003, -0.0033, 0.7599, 0.0021, 0.0002, -0.0002,
       -0.0126, -0.0042, 0.0016, 1.0971, 0.0092, -0.0079,
       0.0171, 0.0058, 0.0002, 0.0170, 0.8179, 0.0108,
       -0.0198, -0.0067, -0.0002, -0.0193, 0.0143, 0.6823,
       -0.1525, -0.0519, -0.0018, -0.1412, 0.1091, -0.0977;
  return K;
}

CostWeights identity_weights(double gamma) {
  return CostWeights(Matrix::Identity(5, 5), Matrix::Identity(7, 7), gamma);
}

CostWeights observer_tuned_weights(double gamma) {
  return CostWeights::diagonal(vec({0.943, 0.762, 0.542, 0.420, 0.514}),
                               vec({0.300, 0.270, 0.281, 0.092, 0.054, 0.269, 0.318}),
                               gamma);
}

CostWeights datadriven_tuned_weights(double gamma) {
  return CostWeights::diagonal(vec({0.174, 0.056, 0.010, 0.010, 0.160}),
                               vec({0.145, 0.389, 0.020, 0.116, 0.099, 0.316, 0.010}),
                               gamma);
}

Vector Reported::observer_y() {
  return vec({149.9798, 159.9932, 169.9795, 174.9815, 179.9859});
}

Vector Reported::datadriven_y() {
  return vec({150.0857, 160.1181, 171.0027, 175.7926, 180.1416});
}

Vector Reported::datadriven_tuned_y() {
  return vec({150.069, 160.154, 170.011, 175.199, 180.176});
}

std::uint64_t fixture_hash() {
  Fnv1a h;
  const StateSpaceModel model = extruder_model();
  h.add(model.A());
  h.add(model.B());
  h.add(model.C());
  h.add(extruder_reference().r0);
  h.add(data_gain());
  for (const CostWeights& w : {observer_tuned_weights(), datadriven_tuned_weights()}) {
    h.add(w.Q);
    h.add(w.R);
  }
  h.add(Reported::observer_y());
  h.add(Reported::datadriven_y());
  h.add(Reported::datadriven_tuned_y());
  for (double x : {Reported::observer_error, Reported::observer_index_1000,
                   Reported::observer_index_100, Reported::observer_tuned_error,
                   Reported::observer_tuned_index_1000,
                   Reported::observer_reduction,
                   Reported::observer_estimation_error,
                   Reported::datadriven_error, Reported::datadriven_index_1000,
                   Reported::datadriven_tuned_error,
                   Reported::datadriven_tuned_index_100,
                   Reported::datadriven_tuned_index_1000,
                   Reported::datadriven_reduction}) {
    h.add(x);
  }
  return h.value();
}

std::uint64_t model_hash(const StateSpaceModel& model) {
  Fnv1a h;
  h.add(model.A());
  h.add(model.B());
  h.add(model.C());
  return h.value();
}

}  // namespace lqt::fixtures

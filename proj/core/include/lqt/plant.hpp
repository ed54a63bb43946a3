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

#include "lqt/statespace.hpp"

namespace lqt {

/// Sealed simulator around a StateSpaceModel. Controllers see only the
/// measured output; the true state is exposed through `diagnostic_state()`
/// solely so traces can record it.
class Plant {
 public:
  Plant(StateSpaceModel model, Vector x0);

  Vector measure() const { return model_.C() * x_; }
  void apply(const Vector& u);

  Eigen::Index input_dim() const { return model_.m(); }
  Eigen::Index output_dim() const { return model_.p(); }

  const Vector& diagnostic_state() const { return x_; }

 private:
  StateSpaceModel model_;
  Vector x_;
};

}  // namespace lqt

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

/// Observer gain L = A C' (C C' + tau I)^-1.
///
/// Requires an observable model and tau > 0. Throws kUnstable, with the
/// spectral radius in the message, when A - L C is not Schur stable.
Matrix design_observer_gain(const StateSpaceModel& model, double tau);

/// Luenberger observer xhat(t+1) = A xhat + B u + L (y - C xhat).
class LuenbergerObserver {
 public:
  /// Designs L from tau.
  LuenbergerObserver(StateSpaceModel model, double tau, Vector xhat0);

  /// Uses a caller-supplied gain; no stability check is made.
  static LuenbergerObserver with_gain(StateSpaceModel model, Matrix gain,
                                      Vector xhat0);

  const Vector& estimate() const { return xhat_; }
  Vector output_estimate() const { return model_.C() * xhat_; }

  /// Advances the estimate with the input applied at t and the output
  /// measured at t; returns xhat(t+1).
  const Vector& observe_step(const Vector& u, const Vector& y);

  const Matrix& gain() const { return gain_; }
  const StateSpaceModel& model() const { return model_; }
  double tau() const { return tau_; }

  /// Spectral radius of A - L C.
  double error_spectral_radius() const;

 private:
  LuenbergerObserver(StateSpaceModel model, Matrix gain, Vector xhat0,
                     double tau);

  StateSpaceModel model_;
  Matrix gain_;
  Vector xhat_;
  double tau_;
};

/// ||xhat - x||_2
double estimation_error(const Vector& xhat, const Vector& x);

}  // namespace lqt

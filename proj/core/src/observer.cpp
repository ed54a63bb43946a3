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

#include "lqt/observer.hpp"

#include <sstream>

#include "lqt/plant.hpp"

namespace lqt {

Plant::Plant(StateSpaceModel model, Vector x0)
    : model_(std::move(model)), x_(std::move(x0)) {
  require_dim(x_.size(), model_.n(), "plant: initial state");
}

void Plant::apply(const Vector& u) { x_ = step(model_, x_, u); }

Matrix design_observer_gain(const StateSpaceModel& model, double tau) {
  if (!(tau > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "observer: tau must be positive");
  }
  if (!is_observable(model)) {
    throw Error(ErrorKind::kInvalidArgument, "observer: model is not observable");
  }
  const Matrix& A = model.A();
  const Matrix& C = model.C();
  const Matrix psi =
      C * C.transpose() + tau * Matrix::Identity(model.p(), model.p());
  Eigen::LLT<Matrix> llt(psi);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::kSingular, "observer: C C' + tau I is not invertible");
  }
  // L = A C' Psi^-1  <=>  L' = Psi^-1 C A'
  const Matrix gain = llt.solve(C * A.transpose()).transpose();

  const double rho = spectral_radius(A - gain * C);
  if (!(rho < 1.0)) {
    std::ostringstream os;
    os << "observer: A - L C is not stable (spectral radius " << rho << ")";
    throw Error(ErrorKind::kUnstable, os.str());
  }
  return gain;
}

LuenbergerObserver::LuenbergerObserver(StateSpaceModel model, double tau,
                                       Vector xhat0)
    : model_(std::move(model)), tau_(tau) {
  gain_ = design_observer_gain(model_, tau);
  require_dim(xhat0.size(), model_.n(), "observer: initial estimate");
  xhat_ = std::move(xhat0);
}

LuenbergerObserver::LuenbergerObserver(StateSpaceModel model, Matrix gain,
                                       Vector xhat0, double tau)
    : model_(std::move(model)),
      gain_(std::move(gain)),
      xhat_(std::move(xhat0)),
      tau_(tau) {
  require_dim(gain_.rows(), model_.n(), "observer: rows of L");
  require_dim(gain_.cols(), model_.p(), "observer: columns of L");
  require_dim(xhat_.size(), model_.n(), "observer: initial estimate");
}

LuenbergerObserver LuenbergerObserver::with_gain(StateSpaceModel model,
                                                 Matrix gain, Vector xhat0) {
  return LuenbergerObserver(std::move(model), std::move(gain),
                            std::move(xhat0), 0.0);
}

const Vector& LuenbergerObserver::observe_step(const Vector& u,
                                               const Vector& y) {
  require_dim(u.size(), model_.m(), "observe_step: input");
  require_dim(y.size(), model_.p(), "observe_step: output");
  const Vector innovation = y - model_.C() * xhat_;
  xhat_ = model_.A() * xhat_ + model_.B() * u + gain_ * innovation;
  return xhat_;
}

double LuenbergerObserver::error_spectral_radius() const {
  return spectral_radius(model_.A() - gain_ * model_.C());
}

double estimation_error(const Vector& xhat, const Vector& x) {
  require_dim(xhat.size(), x.size(), "estimation_error");
  return (xhat - x).norm();
}

}  // namespace lqt

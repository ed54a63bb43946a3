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

#include "lqt/statespace.hpp"

#include <cmath>
#include <sstream>

namespace lqt {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDimension:
      return "dimension";
    case ErrorKind::kInvalidArgument:
      return "invalid-argument";
    case ErrorKind::kNotConverged:
      return "not-converged";
    case ErrorKind::kSingular:
      return "singular";
    case ErrorKind::kUnstable:
      return "unstable";
    case ErrorKind::kDiverged:
      return "diverged";
    case ErrorKind::kIo:
      return "io";
  }
  return "unknown";
}

void require_dim(Eigen::Index actual, Eigen::Index expected,
                 std::string_view what) {
  if (actual != expected) {
    std::ostringstream os;
    os << what << ": expected dimension " << expected << ", got " << actual;
    throw Error(ErrorKind::kDimension, os.str());
  }
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

Eigen::Index matrix_rank(const Matrix& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cutoff = kRankTolerance * s(0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff) ++rank;
  }
  return rank;
}

double spectral_radius(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::EigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double min_symmetric_eigenvalue(const Matrix& m) {
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

StateSpaceModel::StateSpaceModel(Matrix a, Matrix b, Matrix c)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
  if (a_.rows() < 1 || b_.cols() < 1 || c_.rows() < 1) {
    throw Error(ErrorKind::kDimension, "state-space model: n, m, p must be >= 1");
  }
  require_dim(a_.cols(), a_.rows(), "state-space model: A must be square");
  require_dim(b_.rows(), a_.rows(), "state-space model: rows of B");
  require_dim(c_.cols(), a_.rows(), "state-space model: columns of C");
  if (!all_finite(a_) || !all_finite(b_) || !all_finite(c_)) {
    throw Error(ErrorKind::kInvalidArgument,
                "state-space model: matrices contain non-finite entries");
  }
}

ReferenceGenerator::ReferenceGenerator(Matrix f, Vector r)
    : F(std::move(f)), r0(std::move(r)) {
  require_dim(F.cols(), F.rows(), "reference generator: F must be square");
  require_dim(r0.size(), F.rows(), "reference generator: r0");
}

ReferenceGenerator ReferenceGenerator::constant(const Vector& r0) {
  return ReferenceGenerator(Matrix::Identity(r0.size(), r0.size()), r0);
}

CostWeights::CostWeights(Matrix q, Matrix r, double g)
    : Q(std::move(q)), R(std::move(r)), gamma(g) {
  require_dim(Q.cols(), Q.rows(), "cost weights: Q must be square");
  require_dim(R.cols(), R.rows(), "cost weights: R must be square");
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "cost weights: discount factor must lie in (0, 1]");
  }
  auto check = [](const Matrix& w, const char* name) {
    const double asym = (w - w.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * std::max(1.0, w.cwiseAbs().maxCoeff())) {
      throw Error(ErrorKind::kInvalidArgument,
                  std::string("cost weights: ") + name + " is not symmetric");
    }
    if (min_symmetric_eigenvalue(w) <= kPdTolerance) {
      throw Error(ErrorKind::kInvalidArgument,
                  std::string("cost weights: ") + name +
                      " is not positive definite");
    }
  };
  check(Q, "Q");
  check(R, "R");
}

CostWeights CostWeights::diagonal(const Vector& q_diag, const Vector& r_diag,
                                  double gamma) {
  return CostWeights(q_diag.asDiagonal().toDenseMatrix(),
                     r_diag.asDiagonal().toDenseMatrix(), gamma);
}

void SimulationTrace::append(TraceRecord record) {
  const double prev = records_.empty() ? 0.0 : records_.back().cum_cost;
  record.cum_cost = prev + discount_ * record.cost;
  discount_ *= gamma_;
  records_.push_back(std::move(record));
}

Vector SimulationTrace::output_at(std::size_t t) const {
  if (t < records_.size()) return records_[t].y;
  if (t == records_.size() && final_output_) return *final_output_;
  throw Error(ErrorKind::kInvalidArgument,
              "trace: requested output beyond the recorded horizon");
}

Vector step(const StateSpaceModel& model, const Vector& x, const Vector& u) {
  require_dim(x.size(), model.n(), "step: state");
  require_dim(u.size(), model.m(), "step: input");
  return model.A() * x + model.B() * u;
}

Vector output(const StateSpaceModel& model, const Vector& x) {
  require_dim(x.size(), model.n(), "output: state");
  return model.C() * x;
}

Vector reference_step(const ReferenceGenerator& gen, const Vector& r) {
  require_dim(r.size(), gen.p(), "reference_step: reference");
  return gen.F * r;
}

double stage_cost(const CostWeights& w, const Vector& y, const Vector& r,
                  const Vector& u) {
  require_dim(y.size(), w.Q.rows(), "stage_cost: output");
  require_dim(r.size(), w.Q.rows(), "stage_cost: reference");
  require_dim(u.size(), w.R.rows(), "stage_cost: input");
  const Vector e = y - r;
  return e.dot(w.Q * e) + u.dot(w.R * u);
}

double performance_index(const SimulationTrace& trace, const CostWeights& w,
                         std::size_t horizon) {
  if (horizon > trace.size()) {
    std::ostringstream os;
    os << "performance_index: horizon " << horizon << " exceeds trace length "
       << trace.size();
    throw Error(ErrorKind::kInvalidArgument, os.str());
  }
  double total = 0.0;
  double discount = 1.0;
  for (std::size_t t = 0; t < horizon; ++t) {
    const auto& rec = trace.records()[t];
    total += discount * stage_cost(w, rec.y, rec.r, rec.u);
    discount *= w.gamma;
  }
  return total;
}

Matrix controllability_matrix(const StateSpaceModel& model) {
  const auto n = model.n();
  const auto m = model.m();
  Matrix ctrb(n, n * m);
  Matrix block = model.B();
  for (Eigen::Index k = 0; k < n; ++k) {
    ctrb.middleCols(k * m, m) = block;
    block = model.A() * block;
  }
  return ctrb;
}

bool is_controllable(const StateSpaceModel& model) {
  return matrix_rank(controllability_matrix(model)) == model.n();
}

Matrix observability_matrix(const StateSpaceModel& model) {
  const auto n = model.n();
  const auto p = model.p();
  Matrix obsv(n * p, n);
  Matrix block = model.C();
  for (Eigen::Index k = 0; k < n; ++k) {
    obsv.middleRows(k * p, p) = block;
    block = block * model.A();
  }
  return obsv;
}

bool is_observable(const StateSpaceModel& model) {
  return matrix_rank(observability_matrix(model)) == model.n();
}

AugmentedSystem augment(const StateSpaceModel& model,
                        const ReferenceGenerator& gen, const CostWeights& w) {
  const auto n = model.n();
  const auto m = model.m();
  const auto p = model.p();
  require_dim(gen.p(), p, "augment: reference dimension");
  require_dim(w.Q.rows(), p, "augment: Q");
  require_dim(w.R.rows(), m, "augment: R");

  AugmentedSystem aug;
  aug.n = n;
  aug.p = p;
  aug.T = Matrix::Zero(n + p, n + p);
  aug.T.topLeftCorner(n, n) = model.A();
  aug.T.bottomRightCorner(p, p) = gen.F;

  aug.B1 = Matrix::Zero(n + p, m);
  aug.B1.topRows(n) = model.B();

  const Matrix& C = model.C();
  const Matrix qc = w.Q * C;
  aug.Q1.resize(n + p, n + p);
  aug.Q1.topLeftCorner(n, n) = C.transpose() * qc;
  aug.Q1.topRightCorner(n, p) = -qc.transpose();
  aug.Q1.bottomLeftCorner(p, n) = -qc;
  aug.Q1.bottomRightCorner(p, p) = w.Q;
  // C'QC is only symmetric up to rounding; mirror the upper triangle.
  aug.Q1 = aug.Q1.selfadjointView<Eigen::Upper>();
  return aug;
}

}  // namespace lqt

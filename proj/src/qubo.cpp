// Copyright 2026 The qsc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qsc/qubo.hpp"

#include <algorithm>
#include <cmath>

namespace qsc {

template <class Domain>
QuadraticModel<Domain>::QuadraticModel(Vector linear, std::vector<Coupling> quadratic, double offset)
    : linear_(std::move(linear)), quadratic_(std::move(quadratic)), offset_(offset) {
  if (!linear_.allFinite() || !std::isfinite(offset_)) {
    throw Error(ErrorCode::InvalidArgument, "non-finite linear term or offset");
  }
  for (const auto& c : quadratic_) {
    if (c.i >= c.j || c.j >= size()) throw Error(ErrorCode::InvalidArgument, "coupling must satisfy i < j < n");
    if (!std::isfinite(c.value)) throw Error(ErrorCode::InvalidArgument, "non-finite coupling");
  }
  std::sort(quadratic_.begin(), quadratic_.end(),
            [](const Coupling& a, const Coupling& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
  auto dup = std::adjacent_find(quadratic_.begin(), quadratic_.end(),
                                [](const Coupling& a, const Coupling& b) { return a.i == b.i && a.j == b.j; });
  if (dup != quadratic_.end()) throw Error(ErrorCode::InvalidArgument, "duplicate coupling");
}

template <class Domain>
Matrix QuadraticModel<Domain>::symmetric_couplings() const {
  const auto n = static_cast<Eigen::Index>(size());
  Matrix m = Matrix::Zero(n, n);
  for (const auto& c : quadratic_) {
    const auto i = static_cast<Eigen::Index>(c.i);
    const auto j = static_cast<Eigen::Index>(c.j);
    m(i, j) = c.value;
    m(j, i) = c.value;
  }
  return m;
}

template <class Domain>
double QuadraticModel<Domain>::max_abs_coefficient() const {
  double m = linear_.size() > 0 ? linear_.cwiseAbs().maxCoeff() : 0.0;
  for (const auto& c : quadratic_) m = std::max(m, std::abs(c.value));
  return m;
}

template class QuadraticModel<BinaryDomain>;
template class QuadraticModel<SpinDomain>;

void AnnealSchedule::validate() const {
  if (sweeps < 1) throw Error(ErrorCode::InvalidArgument, "schedule needs at least one sweep");
  if (reads < 1) throw Error(ErrorCode::InvalidArgument, "schedule needs at least one read");
  if (!(beta_initial > 0.0) || !(beta_final >= beta_initial) || !std::isfinite(beta_final)) {
    throw Error(ErrorCode::InvalidArgument, "schedule needs 0 < beta_initial <= beta_final");
  }
}

double AnnealSchedule::beta_at(std::size_t sweep) const {
  if (sweeps <= 1) return beta_final;
  const double t = static_cast<double>(sweep) / static_cast<double>(sweeps - 1);
  return beta_initial * std::pow(beta_final / beta_initial, t);
}

QuboProblem build_qubo(const Dictionary& dictionary, const Vector& x, SparsityPenalty lambda) {
  if (static_cast<std::size_t>(x.size()) != dictionary.input_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "input length differs from dictionary height");
  }
  const Matrix& phi = dictionary.atoms();
  const Matrix gram = phi.transpose() * phi;
  const Vector correlation = phi.transpose() * x;
  const auto n = phi.cols();

  Vector linear = (0.5 * gram.diagonal() - correlation).array() + lambda.value();
  std::vector<Coupling> quadratic;
  quadratic.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      quadratic.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), gram(i, j)});
    }
  }
  return QuboProblem(std::move(linear), std::move(quadratic), 0.5 * x.squaredNorm());
}

IsingProblem qubo_to_ising(const QuboProblem& qubo) {
  Vector h = 0.5 * qubo.linear();
  std::vector<Coupling> couplings;
  couplings.reserve(qubo.quadratic().size());
  double offset = qubo.offset() + 0.5 * qubo.linear().sum();
  for (const auto& c : qubo.quadratic()) {
    const double quarter = 0.25 * c.value;
    h[static_cast<Eigen::Index>(c.i)] += quarter;
    h[static_cast<Eigen::Index>(c.j)] += quarter;
    couplings.push_back({c.i, c.j, quarter});
    offset += quarter;
  }
  return IsingProblem(std::move(h), std::move(couplings), offset);
}

QuboProblem ising_to_qubo(const IsingProblem& ising) {
  Vector q = 2.0 * ising.linear();
  std::vector<Coupling> couplings;
  couplings.reserve(ising.quadratic().size());
  double offset = ising.offset() - ising.linear().sum();
  for (const auto& c : ising.quadratic()) {
    q[static_cast<Eigen::Index>(c.i)] -= 2.0 * c.value;
    q[static_cast<Eigen::Index>(c.j)] -= 2.0 * c.value;
    couplings.push_back({c.i, c.j, 4.0 * c.value});
    offset += c.value;
  }
  return QuboProblem(std::move(q), std::move(couplings), offset);
}

double qubo_energy(const QuboProblem& qubo, const SparseCode& code) {
  if (code.size() != qubo.size()) throw Error(ErrorCode::DimensionMismatch, "code length differs from problem size");
  double e = qubo.offset();
  for (std::size_t i = 0; i < code.size(); ++i) {
    if (code[i]) e += qubo.linear()[static_cast<Eigen::Index>(i)];
  }
  for (const auto& c : qubo.quadratic()) {
    if (code[c.i] && code[c.j]) e += c.value;
  }
  return e;
}

double ising_energy(const IsingProblem& ising, std::span<const Spin> spins) {
  if (spins.size() != ising.size()) throw Error(ErrorCode::DimensionMismatch, "spin count differs from problem size");
  double e = ising.offset();
  for (std::size_t i = 0; i < spins.size(); ++i) e += ising.linear()[static_cast<Eigen::Index>(i)] * spins[i];
  for (const auto& c : ising.quadratic()) e += c.value * spins[c.i] * spins[c.j];
  return e;
}

std::vector<Spin> to_spins(const SparseCode& code) {
  std::vector<Spin> s(code.size());
  for (std::size_t i = 0; i < code.size(); ++i) s[i] = code[i] ? Spin{1} : Spin{-1};
  return s;
}

SparseCode from_spins(std::span<const Spin> spins) {
  SparseCode code(spins.size());
  for (std::size_t i = 0; i < spins.size(); ++i) code.set(i, spins[i] > 0);
  return code;
}

bool better_candidate(double energy, const SparseCode& code, double best_energy,
                      const SparseCode& best_code) {
  const double tol = kTieTolerance * std::max(1.0, std::abs(best_energy));
  if (energy < best_energy - tol) return true;
  if (energy > best_energy + tol) return false;
  return sparser_first(code, best_code);
}

}  // namespace qsc

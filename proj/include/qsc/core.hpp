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

#ifndef QSC_CORE_HPP
#define QSC_CORE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qsc/error.hpp"

namespace qsc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Slack allowed on the unit column-norm bound.
inline constexpr double kNormTolerance = 1e-12;

/// Binary activation pattern a in {0,1}^N_q.
class SparseCode {
 public:
  SparseCode() = default;
  explicit SparseCode(std::size_t n) : bits_(n, 0) {}
  explicit SparseCode(std::vector<std::uint8_t> bits);

  /// Bit i of `mask` becomes entry i.
  static SparseCode from_mask(std::uint64_t mask, std::size_t n);

  std::size_t size() const noexcept { return bits_.size(); }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  void set(std::size_t i, bool on) { bits_.at(i) = on ? 1 : 0; }
  std::size_t count_ones() const noexcept;
  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }
  Vector as_vector() const;

  friend bool operator==(const SparseCode&, const SparseCode&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Strict weak order used wherever equal-energy codes must be ranked:
/// fewer ones first, then lexicographically smaller (a_0 first).
bool sparser_first(const SparseCode& lhs, const SparseCode& rhs);

/// D x N_q basis matrix whose columns have Euclidean norm <= 1.
class Dictionary {
 public:
  Dictionary() = default;
  /// Throws InvalidArgument when an entry is non-finite or a column norm
  /// exceeds 1 + kNormTolerance.
  explicit Dictionary(Matrix atoms);

  const Matrix& atoms() const noexcept { return atoms_; }
  std::size_t input_dim() const noexcept { return static_cast<std::size_t>(atoms_.rows()); }
  std::size_t num_atoms() const noexcept { return static_cast<std::size_t>(atoms_.cols()); }
  /// gamma = N_q / D
  double overcompleteness() const;
  Vector column_norms() const { return atoms_.colwise().norm().transpose(); }

  /// phi * a
  Vector reconstruct(const SparseCode& code) const;

 private:
  Matrix atoms_;
};

struct Sample {
  Vector x;
  std::optional<double> y;

  friend bool operator==(const Sample& a, const Sample& b) {
    return a.y == b.y && a.x.size() == b.x.size() && a.x == b.x;
  }
};

/// Per-coordinate training statistics; the last entry belongs to y.
struct StandardizationStats {
  Vector means;
  Vector stddevs;

  std::size_t input_dim() const noexcept { return static_cast<std::size_t>(means.size()) - 1; }
};

class SparsityPenalty {
 public:
  SparsityPenalty() = default;
  explicit SparsityPenalty(double lambda);
  double value() const noexcept { return lambda_; }

 private:
  double lambda_ = 0.0;
};

StandardizationStats standardize_fit(std::span<const Sample> train);
Sample standardize_apply(const StandardizationStats& stats, const Sample& sample);
double standardize_invert(const StandardizationStats& stats, double value, std::size_t coordinate);

/// (x, y) as one vector of length D + 1. Throws InvalidArgument if y is absent.
Vector concatenate(const Sample& sample);

/// 1/2 ||x - phi a||^2 + lambda * |a|_0
double sc_energy(const Dictionary& dictionary, const Vector& x, const SparseCode& code,
                 SparsityPenalty lambda);

/// Rescales every column with norm > 1 onto the unit sphere; other columns
/// are left bit-identical.
Dictionary project_columns(const Matrix& atoms);
Dictionary project_columns(const Dictionary& dictionary);

}  // namespace qsc

#endif  // QSC_CORE_HPP

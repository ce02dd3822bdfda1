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

#include "qsc/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qsc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::TooManyLogicalQubits: return "TooManyLogicalQubits";
    case ErrorCode::UnsupportedMask: return "UnsupportedMask";
    case ErrorCode::EmbeddingMismatch: return "EmbeddingMismatch";
    case ErrorCode::Empty: return "Empty";
    case ErrorCode::BracketInvalid: return "BracketInvalid";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
    case ErrorCode::ReplayMismatch: return "ReplayMismatch";
  }
  return "Unknown";
}

ErrorCategory category_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
      return ErrorCategory::Usage;
    case ErrorCode::TooLarge:
    case ErrorCode::TooManyLogicalQubits:
    case ErrorCode::UnsupportedMask:
    case ErrorCode::EmbeddingMismatch:
    case ErrorCode::BracketInvalid:
    case ErrorCode::TooFewPoints:
    case ErrorCode::ReplayMismatch:
      return ErrorCategory::Numerical;
    default:
      return ErrorCategory::Data;
  }
}

SparseCode::SparseCode(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto b : bits_) {
    if (b > 1) throw Error(ErrorCode::InvalidArgument, "sparse code entries must be 0 or 1");
  }
}

SparseCode SparseCode::from_mask(std::uint64_t mask, std::size_t n) {
  SparseCode code(n);
  for (std::size_t i = 0; i < n; ++i) code.bits_[i] = static_cast<std::uint8_t>((mask >> i) & 1U);
  return code;
}

std::size_t SparseCode::count_ones() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

Vector SparseCode::as_vector() const {
  Vector v(static_cast<Eigen::Index>(bits_.size()));
  for (std::size_t i = 0; i < bits_.size(); ++i) v[static_cast<Eigen::Index>(i)] = bits_[i];
  return v;
}

bool sparser_first(const SparseCode& lhs, const SparseCode& rhs) {
  const auto l = lhs.count_ones();
  const auto r = rhs.count_ones();
  if (l != r) return l < r;
  return lhs.bits() < rhs.bits();
}

Dictionary::Dictionary(Matrix atoms) : atoms_(std::move(atoms)) {
  if (!atoms_.allFinite()) throw Error(ErrorCode::InvalidArgument, "dictionary has non-finite entries");
  for (Eigen::Index j = 0; j < atoms_.cols(); ++j) {
    const double norm = atoms_.col(j).norm();
    if (norm > 1.0 + kNormTolerance) {
      throw Error(ErrorCode::InvalidArgument,
                  "dictionary column " + std::to_string(j) + " has norm " + std::to_string(norm));
    }
  }
}

double Dictionary::overcompleteness() const {
  if (atoms_.rows() == 0) return 0.0;
  return static_cast<double>(atoms_.cols()) / static_cast<double>(atoms_.rows());
}

Vector Dictionary::reconstruct(const SparseCode& code) const {
  if (code.size() != num_atoms()) {
    throw Error(ErrorCode::DimensionMismatch, "code length differs from dictionary width");
  }
  Vector out = Vector::Zero(atoms_.rows());
  for (std::size_t j = 0; j < code.size(); ++j) {
    if (code[j]) out += atoms_.col(static_cast<Eigen::Index>(j));
  }
  return out;
}

SparsityPenalty::SparsityPenalty(double lambda) : lambda_(lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::InvalidArgument, "sparsity penalty must be finite and >= 0");
  }
}

StandardizationStats standardize_fit(std::span<const Sample> train) {
  if (train.size() < 2) throw Error(ErrorCode::TooFewSamples, "need at least two training samples");
  const auto d = train.front().x.size();
  const auto dims = d + 1;
  Matrix data(static_cast<Eigen::Index>(train.size()), dims);
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto& s = train[i];
    if (s.x.size() != d) throw Error(ErrorCode::DimensionMismatch, "ragged training inputs");
    if (!s.y) throw Error(ErrorCode::InvalidArgument, "training sample without y");
    data.row(static_cast<Eigen::Index>(i)) << s.x.transpose(), *s.y;
  }
  if (!data.allFinite()) throw Error(ErrorCode::InvalidArgument, "non-finite training value");

  StandardizationStats stats;
  stats.means = data.colwise().mean().transpose();
  stats.stddevs.resize(dims);
  const double denom = static_cast<double>(train.size() - 1);
  for (Eigen::Index c = 0; c < dims; ++c) {
    const auto col = data.col(c);
    if ((col.array() == col[0]).all()) {
      throw Error(ErrorCode::ZeroVariance, "coordinate " + std::to_string(c) + " is constant");
    }
    stats.stddevs[c] = std::sqrt((col.array() - stats.means[c]).square().sum() / denom);
  }
  return stats;
}

Sample standardize_apply(const StandardizationStats& stats, const Sample& sample) {
  const auto d = stats.input_dim();
  if (static_cast<std::size_t>(sample.x.size()) != d) {
    throw Error(ErrorCode::DimensionMismatch, "sample dimension differs from statistics");
  }
  Sample out;
  out.x = (sample.x - stats.means.head(d)).cwiseQuotient(stats.stddevs.head(d));
  if (sample.y) out.y = (*sample.y - stats.means[d]) / stats.stddevs[d];
  return out;
}

double standardize_invert(const StandardizationStats& stats, double value, std::size_t coordinate) {
  if (coordinate >= static_cast<std::size_t>(stats.means.size())) {
    throw Error(ErrorCode::DimensionMismatch, "coordinate out of range");
  }
  const auto c = static_cast<Eigen::Index>(coordinate);
  return value * stats.stddevs[c] + stats.means[c];
}

Vector concatenate(const Sample& sample) {
  if (!sample.y) throw Error(ErrorCode::InvalidArgument, "sample has no y to concatenate");
  Vector v(sample.x.size() + 1);
  v << sample.x, *sample.y;
  return v;
}

double sc_energy(const Dictionary& dictionary, const Vector& x, const SparseCode& code,
                 SparsityPenalty lambda) {
  if (static_cast<std::size_t>(x.size()) != dictionary.input_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "input length differs from dictionary height");
  }
  const Vector residual = x - dictionary.reconstruct(code);
  return 0.5 * residual.squaredNorm() + lambda.value() * static_cast<double>(code.count_ones());
}

Dictionary project_columns(const Matrix& atoms) {
  Matrix out = atoms;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    auto col = out.col(j);
    const double norm = col.norm();
    if (!(norm > 1.0)) continue;
    col /= norm;
    // Rounding can leave the norm one ulp above 1; shrink until feasible so
    // that a second projection is the identity.
    while (col.norm() > 1.0) col *= 1.0 - std::numeric_limits<double>::epsilon();
  }
  return Dictionary(std::move(out));
}

Dictionary project_columns(const Dictionary& dictionary) { return project_columns(dictionary.atoms()); }

}  // namespace qsc

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

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "qsc/qubo.hpp"

// Exhaustive search splits the variables into an inner block (up to 12 bits)
// and an outer block. The inner block's pairwise energy is tabulated once; the
// outer block is walked in Gray-code order, and for every outer assignment the
// inner linear terms are folded into two small half-tables so that each of
// the 2^n codes costs one table add and one compare.

namespace qsc {
namespace {

constexpr std::size_t kInnerBits = 12;

bool mask_ranks_first(std::uint64_t lhs, std::uint64_t rhs) {
  const int l = std::popcount(lhs);
  const int r = std::popcount(rhs);
  if (l != r) return l < r;
  const std::uint64_t diff = lhs ^ rhs;
  if (diff == 0) return false;
  // At the lowest differing index the lexicographically smaller code holds 0.
  return (lhs & (diff & (~diff + 1))) == 0;
}

struct Incumbent {
  double energy;
  std::uint64_t mask;

  double slack() const { return kTieTolerance * std::max(1.0, std::abs(energy)); }

  void offer(double e, std::uint64_t m) {
    const double tol = slack();
    if (e < energy - tol || (e <= energy + tol && mask_ranks_first(m, mask))) {
      energy = e;
      mask = m;
    }
  }
};

}  // namespace

SolveResult solve_exhaustive(const QuboProblem& qubo) {
  const std::size_t n = qubo.size();
  if (n > kExhaustiveLimit) {
    throw Error(ErrorCode::TooLarge, "exhaustive search is capped at " + std::to_string(kExhaustiveLimit) +
                                         " variables, got " + std::to_string(n));
  }
  const Matrix coupling = qubo.symmetric_couplings();
  const Vector& q = qubo.linear();

  const std::size_t inner = std::min(n, kInnerBits);
  const std::size_t low_bits = inner / 2;
  const std::size_t high_bits = inner - low_bits;
  const std::size_t outer = n - inner;
  const std::size_t low_size = std::size_t{1} << low_bits;
  const std::size_t high_size = std::size_t{1} << high_bits;
  const std::size_t inner_size = std::size_t{1} << inner;

  // pair_energy[m] = sum_{i<j in m} Q_ij over inner variables.
  std::vector<double> pair_energy(inner_size, 0.0);
  for (std::size_t m = 1; m < inner_size; ++m) {
    const auto top = static_cast<std::size_t>(std::bit_width(m) - 1);
    const std::size_t rest = m ^ (std::size_t{1} << top);
    double acc = pair_energy[rest];
    for (std::size_t r = rest; r != 0; r &= r - 1) {
      acc += coupling(static_cast<Eigen::Index>(top), std::countr_zero(r));
    }
    pair_energy[m] = acc;
  }

  // Field on every variable from the active outer variables, and the outer
  // block's own energy.
  std::vector<double> outer_field(n, 0.0);
  double outer_energy = 0.0;
  std::uint64_t outer_mask = 0;

  std::vector<double> low_linear(low_size, 0.0);
  std::vector<double> high_linear(high_size, 0.0);

  Incumbent best{qubo.offset(), 0};
  const double inf = std::numeric_limits<double>::infinity();

  const std::uint64_t outer_count = std::uint64_t{1} << outer;
  for (std::uint64_t t = 0; t < outer_count; ++t) {
    if (t != 0) {
      const auto bit = static_cast<std::size_t>(std::countr_zero(t));
      const std::size_t v = inner + bit;
      const auto vi = static_cast<Eigen::Index>(v);
      outer_mask ^= std::uint64_t{1} << bit;
      if ((outer_mask >> bit) & 1U) {
        outer_energy += q[vi] + outer_field[v];
        for (std::size_t j = 0; j < n; ++j) outer_field[j] += coupling(vi, static_cast<Eigen::Index>(j));
      } else {
        for (std::size_t j = 0; j < n; ++j) outer_field[j] -= coupling(vi, static_cast<Eigen::Index>(j));
        outer_energy -= q[vi] + outer_field[v];
      }
    }

    for (std::size_t m = 1; m < low_size; ++m) {
      const auto b = static_cast<std::size_t>(std::countr_zero(m));
      low_linear[m] = low_linear[m & (m - 1)] + q[static_cast<Eigen::Index>(b)] + outer_field[b];
    }
    for (std::size_t m = 1; m < high_size; ++m) {
      const auto b = low_bits + static_cast<std::size_t>(std::countr_zero(m));
      high_linear[m] = high_linear[m & (m - 1)] + q[static_cast<Eigen::Index>(b)] + outer_field[b];
    }

    const double base = qubo.offset() + outer_energy;
    const std::uint64_t outer_part = outer_mask << inner;
    for (std::size_t hi = 0; hi < high_size; ++hi) {
      const double row_base = base + high_linear[hi];
      const double* row = pair_energy.data() + (hi << low_bits);
      const double* lin = low_linear.data();

      double m0 = inf, m1 = inf, m2 = inf, m3 = inf;
      std::size_t lo = 0;
      for (; lo + 4 <= low_size; lo += 4) {
        m0 = std::min(m0, row[lo] + lin[lo]);
        m1 = std::min(m1, row[lo + 1] + lin[lo + 1]);
        m2 = std::min(m2, row[lo + 2] + lin[lo + 2]);
        m3 = std::min(m3, row[lo + 3] + lin[lo + 3]);
      }
      for (; lo < low_size; ++lo) m0 = std::min(m0, row[lo] + lin[lo]);
      const double row_min = std::min(std::min(m0, m1), std::min(m2, m3));
      if (row_base + row_min > best.energy + best.slack()) continue;

      for (lo = 0; lo < low_size; ++lo) {
        const double e = row_base + row[lo] + lin[lo];
        if (e <= best.energy + best.slack()) best.offer(e, outer_part | (hi << low_bits) | lo);
      }
    }
  }

  SolveResult result;
  result.best_code = SparseCode::from_mask(best.mask, n);
  result.best_energy = qubo_energy(qubo, result.best_code);
  result.reads_taken = 1;
  result.all_energies = {result.best_energy};
  return result;
}

}  // namespace qsc

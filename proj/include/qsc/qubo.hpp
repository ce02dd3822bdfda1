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

#ifndef QSC_QUBO_HPP
#define QSC_QUBO_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qsc/core.hpp"

namespace qsc {

using Spin = std::int8_t;

/// One off-diagonal coefficient, always stored with i < j.
struct Coupling {
  std::size_t i = 0;
  std::size_t j = 0;
  double value = 0.0;

  friend bool operator==(const Coupling&, const Coupling&) = default;
};

/// offset + sum_i linear_i v_i + sum_{i<j} quadratic_ij v_i v_j, where the
/// variables are bits for QuboProblem and spins for IsingProblem.
template <class Domain>
class QuadraticModel {
 public:
  QuadraticModel() = default;
  explicit QuadraticModel(std::size_t n) : linear_(Vector::Zero(static_cast<Eigen::Index>(n))) {}
  /// Sorts couplings by (i, j). Throws InvalidArgument on i >= j, duplicate
  /// pairs, out-of-range indices or non-finite values.
  QuadraticModel(Vector linear, std::vector<Coupling> quadratic, double offset);

  std::size_t size() const noexcept { return static_cast<std::size_t>(linear_.size()); }
  const Vector& linear() const noexcept { return linear_; }
  const std::vector<Coupling>& quadratic() const noexcept { return quadratic_; }
  double offset() const noexcept { return offset_; }

  /// Dense symmetric coupling matrix with a zero diagonal.
  Matrix symmetric_couplings() const;
  /// Largest absolute linear or quadratic coefficient.
  double max_abs_coefficient() const;

  friend bool operator==(const QuadraticModel& a, const QuadraticModel& b) {
    return a.offset_ == b.offset_ && a.linear_.size() == b.linear_.size() &&
           a.linear_ == b.linear_ && a.quadratic_ == b.quadratic_;
  }

 private:
  Vector linear_;
  std::vector<Coupling> quadratic_;
  double offset_ = 0.0;
};

struct BinaryDomain {};
struct SpinDomain {};

/// Energy over a in {0,1}^n.
using QuboProblem = QuadraticModel<BinaryDomain>;
/// Energy over s in {-1,+1}^n; linear() are the biases h, quadratic() the couplings J.
using IsingProblem = QuadraticModel<SpinDomain>;

extern template class QuadraticModel<BinaryDomain>;
extern template class QuadraticModel<SpinDomain>;

struct SolveResult {
  SparseCode best_code;
  double best_energy = 0.0;
  std::size_t reads_taken = 0;
  std::vector<double> all_energies;
};

/// Geometric inverse-temperature schedule for single-flip Metropolis.
struct AnnealSchedule {
  std::size_t sweeps = 1000;
  double beta_initial = 0.1;
  double beta_final = 10.0;
  std::size_t reads = 20;
  std::uint64_t seed = 0;

  /// Throws InvalidArgument unless sweeps >= 1, reads >= 1 and
  /// 0 < beta_initial <= beta_final.
  void validate() const;
  /// Inverse temperature used on sweep `sweep` (0-based).
  double beta_at(std::size_t sweep) const;
};

/// Exact QUBO for the code minimisation of 1/2||x - phi a||^2 + lambda|a|:
/// offset 1/2||x||^2, linear lambda + 1/2||phi_i||^2 - phi_i.x, quadratic
/// phi_i.phi_j.
QuboProblem build_qubo(const Dictionary& dictionary, const Vector& x, SparsityPenalty lambda);

/// Substitutes a = (s + 1) / 2.
IsingProblem qubo_to_ising(const QuboProblem& qubo);
/// Substitutes s = 2a - 1.
QuboProblem ising_to_qubo(const IsingProblem& ising);

double qubo_energy(const QuboProblem& qubo, const SparseCode& code);
double ising_energy(const IsingProblem& ising, std::span<const Spin> spins);

std::vector<Spin> to_spins(const SparseCode& code);
SparseCode from_spins(std::span<const Spin> spins);

inline constexpr std::size_t kExhaustiveLimit = 26;

/// Global minimiser by enumeration of all 2^n codes. Codes whose energies
/// agree to within kTieTolerance (relative) are ranked by sparser_first.
/// Throws TooLarge for n > kExhaustiveLimit.
SolveResult solve_exhaustive(const QuboProblem& qubo);

/// Relative energy difference below which two codes count as tied.
inline constexpr double kTieTolerance = 1e-11;

/// True when `energy`/`code` should replace the incumbent.
bool better_candidate(double energy, const SparseCode& code, double best_energy,
                      const SparseCode& best_code);

/// Final spin states of `schedule.reads` independent anneals. Read r draws
/// from the substream derive_seed(schedule.seed, first_stream + r), so the
/// output does not depend on how reads are scheduled across threads.
std::vector<std::vector<Spin>> anneal_ising(const IsingProblem& ising, const AnnealSchedule& schedule,
                                            std::uint64_t first_stream = 0);

/// Simulated annealing on qubo_to_ising(qubo); returns the lowest-energy read.
SolveResult solve_sa(const QuboProblem& qubo, const AnnealSchedule& schedule);

}  // namespace qsc

#endif  // QSC_QUBO_HPP

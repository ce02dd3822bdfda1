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

#ifndef QSC_LEARN_HPP
#define QSC_LEARN_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "qsc/chimera.hpp"
#include "qsc/core.hpp"
#include "qsc/qubo.hpp"

namespace qsc::learn {

enum class SolverKind { Exhaustive, Annealing, EmbeddedAnnealing };

/// "exhaustive", "sa" or "embedded-sa".
std::string_view to_string(SolverKind kind);
SolverKind parse_solver_kind(std::string_view name);

struct SolverConfig {
  SolverKind kind = SolverKind::Exhaustive;
  AnnealSchedule schedule;
  /// Chain strengths for EmbeddedAnnealing; empty selects
  /// chimera::default_chain_strengths per problem.
  std::vector<double> chain_strengths;
  /// Side of the largest square Chimera grid the embedded solver may use.
  std::size_t chimera_size = 16;
};

/// Code solver bound to one problem width. Holds the hardware graph and
/// clique embedding when the backend needs them.
class CodeSolver {
 public:
  CodeSolver(SolverConfig config, std::size_t num_atoms);

  /// Solves `qubo` with the anneal seed replaced by `seed`.
  SolveResult solve(const QuboProblem& qubo, std::uint64_t seed) const;
  /// Solve seeded from the content of `x`, so equal inputs get equal codes.
  SolveResult solve_for(const QuboProblem& qubo, const Vector& x) const;

  const SolverConfig& config() const noexcept { return config_; }
  std::size_t num_atoms() const noexcept { return num_atoms_; }

 private:
  SolverConfig config_;
  std::size_t num_atoms_;
  std::shared_ptr<const chimera::HardwareGraph> graph_;
  std::shared_ptr<const chimera::Embedding> embedding_;
};

struct LearnConfig {
  double eta_initial = 0.01;
  /// T in eta_t = eta_initial / (1 + t / T); 0 means one epoch's batch count.
  std::size_t eta_decay_steps = 0;
  std::size_t batch_size = 50;
  std::size_t max_outer_iters = 10;
  double converge_tol = 1e-3;
  SparsityPenalty lambda{0.1};
  /// When set, lambda is re-tuned to this mean sparsity before every
  /// inference pass.
  std::optional<double> target_sparsity;
  std::size_t probe_size = 128;
  SolverConfig solver;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrainTrace {
  std::vector<double> mean_energy;
  std::vector<double> mean_sparsity;
  std::vector<double> lambda;
  std::size_t outer_iterations = 0;
};

std::vector<SparseCode> infer_codes(const Dictionary& dictionary, std::span<const Vector> inputs,
                                    SparsityPenalty lambda, const CodeSolver& solver);
std::vector<SparseCode> infer_codes(const Dictionary& dictionary, std::span<const Vector> inputs,
                                    SparsityPenalty lambda, const SolverConfig& solver);

/// d E_b / d phi for E_b the batch-mean sparse-coding energy.
Matrix grad_dictionary(const Dictionary& dictionary, std::span<const Vector> batch_x,
                       std::span<const SparseCode> batch_a);

/// project_columns(phi - eta * gradient)
Dictionary sgd_step(const Dictionary& dictionary, const Matrix& gradient, double eta);

double mean_energy(const Dictionary& dictionary, std::span<const Vector> inputs,
                   std::span<const SparseCode> codes, SparsityPenalty lambda);

/// Alternates code inference and one shuffled epoch of batched SGD. Stops
/// when an epoch changes the mean energy of its codes by less than
/// converge_tol (relative), or after max_outer_iters alternations.
std::pair<Dictionary, TrainTrace> train_dictionary(std::span<const Vector> inputs, const Dictionary& initial,
                                                   const LearnConfig& config);

/// Mean fraction of ones. Throws Empty for no codes.
double sparsity(std::span<const SparseCode> codes);

struct LambdaBounds {
  double lo = 0.0;
  double hi = 1.0;
};

/// Bisection on probe-subset sparsity; stops once within 0.02 of the target
/// or after 20 halvings. Throws BracketInvalid unless
/// sparsity(lo) >= target >= sparsity(hi).
SparsityPenalty tune_lambda(const Dictionary& dictionary, std::span<const Vector> inputs, double target,
                            const SolverConfig& solver, LambdaBounds bounds, std::size_t probe_size = 128,
                            std::uint64_t seed = 0);

/// tune_lambda with lo = 0 and hi found by doubling. Returns 0 when even
/// lambda = 0 is at most the target sparsity.
SparsityPenalty auto_tune_lambda(const Dictionary& dictionary, std::span<const Vector> inputs, double target,
                                 const SolverConfig& solver, std::size_t probe_size = 128, std::uint64_t seed = 0);

/// Entries uniform in [-1, 1], then projected onto the unit-norm bound.
Dictionary random_dictionary(std::size_t rows, std::size_t cols, std::uint64_t seed);

}  // namespace qsc::learn

#endif  // QSC_LEARN_HPP

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

#include "qsc/learn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "qsc/parallel.hpp"
#include "qsc/rng.hpp"

namespace qsc::learn {
namespace {

constexpr double kSparsityTolerance = 0.02;
constexpr int kMaxBisections = 20;

std::vector<Vector> probe_subset(std::span<const Vector> inputs, std::size_t probe_size, std::uint64_t seed) {
  if (inputs.size() <= probe_size) return {inputs.begin(), inputs.end()};
  std::vector<Vector> probe;
  probe.reserve(probe_size);
  Rng rng(derive_seed(seed, 0x7072'6f62ULL));
  std::sample(inputs.begin(), inputs.end(), std::back_inserter(probe), probe_size, rng);
  return probe;
}

double probe_sparsity(const Dictionary& dictionary, std::span<const Vector> probe, double lambda,
                      const CodeSolver& solver) {
  return sparsity(infer_codes(dictionary, probe, SparsityPenalty(lambda), solver));
}

}  // namespace

std::string_view to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::Exhaustive: return "exhaustive";
    case SolverKind::Annealing: return "sa";
    case SolverKind::EmbeddedAnnealing: return "embedded-sa";
  }
  return "exhaustive";
}

SolverKind parse_solver_kind(std::string_view name) {
  if (name == "exhaustive") return SolverKind::Exhaustive;
  if (name == "sa") return SolverKind::Annealing;
  if (name == "embedded-sa") return SolverKind::EmbeddedAnnealing;
  throw Error(ErrorCode::InvalidArgument, "unknown solver '" + std::string(name) + "'");
}

CodeSolver::CodeSolver(SolverConfig config, std::size_t num_atoms)
    : config_(std::move(config)), num_atoms_(num_atoms) {
  switch (config_.kind) {
    case SolverKind::Exhaustive:
      if (num_atoms > kExhaustiveLimit) {
        throw Error(ErrorCode::TooLarge, "exhaustive solver supports at most " + std::to_string(kExhaustiveLimit) +
                                             " atoms, got " + std::to_string(num_atoms));
      }
      break;
    case SolverKind::Annealing:
      config_.schedule.validate();
      break;
    case SolverKind::EmbeddedAnnealing: {
      config_.schedule.validate();
      std::size_t m = 1;
      while (chimera::kShore * m + 1 < num_atoms) ++m;
      if (m > config_.chimera_size) {
        throw Error(ErrorCode::TooManyLogicalQubits,
                    std::to_string(num_atoms) + " atoms do not fit a " + std::to_string(config_.chimera_size) +
                        "x" + std::to_string(config_.chimera_size) + " Chimera grid");
      }
      auto graph = std::make_shared<chimera::HardwareGraph>(chimera::build_chimera(m, m));
      embedding_ = std::make_shared<chimera::Embedding>(chimera::embed_complete(num_atoms, *graph));
      graph_ = std::move(graph);
      break;
    }
  }
}

SolveResult CodeSolver::solve(const QuboProblem& qubo, std::uint64_t seed) const {
  if (qubo.size() != num_atoms_) throw Error(ErrorCode::DimensionMismatch, "problem width differs from solver");
  AnnealSchedule schedule = config_.schedule;
  schedule.seed = seed;
  switch (config_.kind) {
    case SolverKind::Exhaustive:
      return solve_exhaustive(qubo);
    case SolverKind::Annealing:
      return solve_sa(qubo, schedule);
    case SolverKind::EmbeddedAnnealing: {
      const IsingProblem ising = qubo_to_ising(qubo);
      const auto xi = config_.chain_strengths.empty() ? chimera::default_chain_strengths(ising)
                                                      : config_.chain_strengths;
      auto out = chimera::solve_embedded(ising, *embedding_, *graph_, xi, schedule).result;
      // Report the QUBO energy so every backend speaks the same units.
      out.best_energy = qubo_energy(qubo, out.best_code);
      return out;
    }
  }
  return solve_exhaustive(qubo);
}

SolveResult CodeSolver::solve_for(const QuboProblem& qubo, const Vector& x) const {
  return solve(qubo, derive_seed(config_.schedule.seed, hash_doubles({x.data(), static_cast<std::size_t>(x.size())})));
}

void LearnConfig::validate() const {
  if (!(eta_initial > 0.0)) throw Error(ErrorCode::InvalidArgument, "eta_initial must be > 0");
  if (batch_size < 1) throw Error(ErrorCode::InvalidArgument, "batch_size must be >= 1");
  if (!(converge_tol >= 0.0)) throw Error(ErrorCode::InvalidArgument, "converge_tol must be >= 0");
  if (target_sparsity && !(*target_sparsity > 0.0 && *target_sparsity < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "target sparsity must lie in (0, 1)");
  }
  if (probe_size < 1) throw Error(ErrorCode::InvalidArgument, "probe_size must be >= 1");
}

std::vector<SparseCode> infer_codes(const Dictionary& dictionary, std::span<const Vector> inputs,
                                    SparsityPenalty lambda, const CodeSolver& solver) {
  std::vector<SparseCode> codes(inputs.size());
  parallel_for(inputs.size(), [&](std::size_t k) {
    codes[k] = solver.solve_for(build_qubo(dictionary, inputs[k], lambda), inputs[k]).best_code;
  });
  return codes;
}

std::vector<SparseCode> infer_codes(const Dictionary& dictionary, std::span<const Vector> inputs,
                                    SparsityPenalty lambda, const SolverConfig& solver) {
  return infer_codes(dictionary, inputs, lambda, CodeSolver(solver, dictionary.num_atoms()));
}

Matrix grad_dictionary(const Dictionary& dictionary, std::span<const Vector> batch_x,
                       std::span<const SparseCode> batch_a) {
  if (batch_x.empty()) throw Error(ErrorCode::Empty, "gradient of an empty batch");
  if (batch_x.size() != batch_a.size()) throw Error(ErrorCode::DimensionMismatch, "batch inputs and codes differ in count");
  const auto d = static_cast<Eigen::Index>(dictionary.input_dim());
  const auto n = static_cast<Eigen::Index>(dictionary.num_atoms());
  const auto nb = static_cast<Eigen::Index>(batch_x.size());
  Matrix x(d, nb);
  Matrix a(n, nb);
  for (Eigen::Index i = 0; i < nb; ++i) {
    const auto& xi = batch_x[static_cast<std::size_t>(i)];
    const auto& ai = batch_a[static_cast<std::size_t>(i)];
    if (xi.size() != d || static_cast<Eigen::Index>(ai.size()) != n) {
      throw Error(ErrorCode::DimensionMismatch, "batch entry does not match dictionary shape");
    }
    x.col(i) = xi;
    a.col(i) = ai.as_vector();
  }
  const Matrix residual = x - dictionary.atoms() * a;
  return -(residual * a.transpose()) / static_cast<double>(nb);
}

Dictionary sgd_step(const Dictionary& dictionary, const Matrix& gradient, double eta) {
  if (gradient.rows() != dictionary.atoms().rows() || gradient.cols() != dictionary.atoms().cols()) {
    throw Error(ErrorCode::DimensionMismatch, "gradient shape differs from dictionary");
  }
  return project_columns(Matrix(dictionary.atoms() - eta * gradient));
}

double mean_energy(const Dictionary& dictionary, std::span<const Vector> inputs,
                   std::span<const SparseCode> codes, SparsityPenalty lambda) {
  if (inputs.empty()) throw Error(ErrorCode::Empty, "mean energy of no inputs");
  double total = 0.0;
  for (std::size_t k = 0; k < inputs.size(); ++k) total += sc_energy(dictionary, inputs[k], codes[k], lambda);
  return total / static_cast<double>(inputs.size());
}

std::pair<Dictionary, TrainTrace> train_dictionary(std::span<const Vector> inputs, const Dictionary& initial,
                                                   const LearnConfig& config) {
  config.validate();
  Dictionary phi = initial;
  TrainTrace trace;
  if (config.max_outer_iters == 0) return {std::move(phi), std::move(trace)};
  if (inputs.empty()) throw Error(ErrorCode::Empty, "no training inputs");

  const CodeSolver solver(config.solver, phi.num_atoms());
  const std::size_t n = inputs.size();
  const std::size_t batches = (n + config.batch_size - 1) / config.batch_size;
  const double decay_steps = static_cast<double>(config.eta_decay_steps > 0 ? config.eta_decay_steps : batches);
  SparsityPenalty lambda = config.lambda;
  std::size_t step = 0;

  std::vector<std::size_t> order(n);
  std::vector<Vector> batch_x;
  std::vector<SparseCode> batch_a;
  for (std::size_t outer = 0; outer < config.max_outer_iters; ++outer) {
    if (config.target_sparsity) {
      lambda = auto_tune_lambda(phi, inputs, *config.target_sparsity, config.solver, config.probe_size,
                                derive_seed(config.seed, outer));
    }
    const auto codes = infer_codes(phi, inputs, lambda, solver);
    const double before = mean_energy(phi, inputs, codes, lambda);
    trace.mean_energy.push_back(before);
    trace.mean_sparsity.push_back(sparsity(codes));
    trace.lambda.push_back(lambda.value());

    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(config.seed, 0x5348'5546ULL + outer));
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t b = 0; b < batches; ++b) {
      const std::size_t lo = b * config.batch_size;
      const std::size_t hi = std::min(n, lo + config.batch_size);
      batch_x.clear();
      batch_a.clear();
      for (std::size_t k = lo; k < hi; ++k) {
        batch_x.push_back(inputs[order[k]]);
        batch_a.push_back(codes[order[k]]);
      }
      const double eta = config.eta_initial / (1.0 + static_cast<double>(step) / decay_steps);
      phi = sgd_step(phi, grad_dictionary(phi, batch_x, batch_a), eta);
      ++step;
    }
    ++trace.outer_iterations;

    const double after = mean_energy(phi, inputs, codes, lambda);
    if (std::abs(before - after) <= config.converge_tol * std::abs(before)) break;
  }
  return {std::move(phi), std::move(trace)};
}

double sparsity(std::span<const SparseCode> codes) {
  if (codes.empty()) throw Error(ErrorCode::Empty, "sparsity of no codes");
  std::size_t ones = 0;
  std::size_t total = 0;
  for (const auto& c : codes) {
    ones += c.count_ones();
    total += c.size();
  }
  return total == 0 ? 0.0 : static_cast<double>(ones) / static_cast<double>(total);
}

SparsityPenalty tune_lambda(const Dictionary& dictionary, std::span<const Vector> inputs, double target,
                            const SolverConfig& solver_config, LambdaBounds bounds, std::size_t probe_size,
                            std::uint64_t seed) {
  if (!(target > 0.0 && target < 1.0)) throw Error(ErrorCode::InvalidArgument, "target sparsity must lie in (0, 1)");
  if (inputs.empty()) throw Error(ErrorCode::Empty, "no inputs to tune lambda on");
  if (!(bounds.lo >= 0.0 && bounds.hi >= bounds.lo)) throw Error(ErrorCode::BracketInvalid, "need 0 <= lo <= hi");

  const CodeSolver solver(solver_config, dictionary.num_atoms());
  const auto probe = probe_subset(inputs, probe_size, seed);
  const double s_lo = probe_sparsity(dictionary, probe, bounds.lo, solver);
  const double s_hi = probe_sparsity(dictionary, probe, bounds.hi, solver);
  if (!(s_lo >= target && target >= s_hi)) {
    throw Error(ErrorCode::BracketInvalid, "sparsity " + std::to_string(s_lo) + " .. " + std::to_string(s_hi) +
                                               " does not bracket " + std::to_string(target));
  }
  double lo = bounds.lo;
  double hi = bounds.hi;
  for (int it = 0; it < kMaxBisections; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double s = probe_sparsity(dictionary, probe, mid, solver);
    if (std::abs(s - target) <= kSparsityTolerance) return SparsityPenalty(mid);
    if (s > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return SparsityPenalty(0.5 * (lo + hi));
}

SparsityPenalty auto_tune_lambda(const Dictionary& dictionary, std::span<const Vector> inputs, double target,
                                 const SolverConfig& solver_config, std::size_t probe_size, std::uint64_t seed) {
  if (inputs.empty()) throw Error(ErrorCode::Empty, "no inputs to tune lambda on");
  const CodeSolver solver(solver_config, dictionary.num_atoms());
  const auto probe = probe_subset(inputs, probe_size, seed);
  if (probe_sparsity(dictionary, probe, 0.0, solver) <= target) return SparsityPenalty(0.0);
  double hi = 0.5;
  for (int it = 0; it < 60 && probe_sparsity(dictionary, probe, hi, solver) > target; ++it) hi *= 2.0;
  return tune_lambda(dictionary, inputs, target, solver_config, {0.0, hi}, probe_size, seed);
}

Dictionary random_dictionary(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x6469'6374ULL));
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  Matrix atoms(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < atoms.cols(); ++j) {
    for (Eigen::Index i = 0; i < atoms.rows(); ++i) atoms(i, j) = uniform(rng);
  }
  return project_columns(atoms);
}

}  // namespace qsc::learn

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

#include <cmath>
#include <vector>

#include "qsc/parallel.hpp"
#include "qsc/qubo.hpp"
#include "qsc/rng.hpp"

namespace qsc {
namespace {

// Compressed adjacency of the coupling graph.
struct SpinGraph {
  std::vector<std::size_t> offsets;
  std::vector<std::size_t> neighbors;
  std::vector<double> weights;

  explicit SpinGraph(const IsingProblem& ising) {
    const std::size_t n = ising.size();
    std::vector<std::size_t> degree(n, 0);
    for (const auto& c : ising.quadratic()) {
      if (c.value == 0.0) continue;
      ++degree[c.i];
      ++degree[c.j];
    }
    offsets.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) offsets[i + 1] = offsets[i] + degree[i];
    neighbors.resize(offsets[n]);
    weights.resize(offsets[n]);
    std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
    for (const auto& c : ising.quadratic()) {
      if (c.value == 0.0) continue;
      neighbors[fill[c.i]] = c.j;
      weights[fill[c.i]++] = c.value;
      neighbors[fill[c.j]] = c.i;
      weights[fill[c.j]++] = c.value;
    }
  }
};

inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<Spin> anneal_once(const IsingProblem& ising, const SpinGraph& graph,
                              const std::vector<double>& betas, std::uint64_t seed) {
  const std::size_t n = ising.size();
  Rng rng(seed);
  std::vector<Spin> spins(n);
  for (auto& s : spins) s = (rng() & 1U) ? Spin{1} : Spin{-1};

  std::vector<double> field(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double f = 0.0;
    for (std::size_t k = graph.offsets[i]; k < graph.offsets[i + 1]; ++k) {
      f += graph.weights[k] * spins[graph.neighbors[k]];
    }
    field[i] = f;
  }

  const double* h = ising.linear().data();
  for (double beta : betas) {
    for (std::size_t i = 0; i < n; ++i) {
      const double delta = -2.0 * spins[i] * (h[i] + field[i]);
      if (delta > 0.0 && uniform01(rng) >= std::exp(-beta * delta)) continue;
      spins[i] = static_cast<Spin>(-spins[i]);
      const double change = 2.0 * spins[i];
      for (std::size_t k = graph.offsets[i]; k < graph.offsets[i + 1]; ++k) {
        field[graph.neighbors[k]] += change * graph.weights[k];
      }
    }
  }
  return spins;
}

}  // namespace

std::vector<std::vector<Spin>> anneal_ising(const IsingProblem& ising, const AnnealSchedule& schedule,
                                            std::uint64_t first_stream) {
  schedule.validate();
  const SpinGraph graph(ising);
  std::vector<double> betas(schedule.sweeps);
  for (std::size_t s = 0; s < schedule.sweeps; ++s) betas[s] = schedule.beta_at(s);

  std::vector<std::vector<Spin>> samples(schedule.reads);
  parallel_for(schedule.reads, [&](std::size_t r) {
    samples[r] = anneal_once(ising, graph, betas, derive_seed(schedule.seed, first_stream + r));
  });
  return samples;
}

SolveResult solve_sa(const QuboProblem& qubo, const AnnealSchedule& schedule) {
  const auto samples = anneal_ising(qubo_to_ising(qubo), schedule);
  SolveResult result;
  result.reads_taken = samples.size();
  result.all_energies.reserve(samples.size());
  for (const auto& spins : samples) {
    SparseCode code = from_spins(spins);
    const double e = qubo_energy(qubo, code);
    result.all_energies.push_back(e);
    if (result.all_energies.size() == 1 || better_candidate(e, code, result.best_energy, result.best_code)) {
      result.best_energy = e;
      result.best_code = std::move(code);
    }
  }
  return result;
}

}  // namespace qsc

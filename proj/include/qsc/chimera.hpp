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

#ifndef QSC_CHIMERA_HPP
#define QSC_CHIMERA_HPP

#include <cstddef>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qsc/qubo.hpp"

namespace qsc::chimera {

/// Qubits per side of a unit cell.
inline constexpr std::size_t kShore = 4;

using QubitPair = std::pair<std::size_t, std::size_t>;

/// Position of a qubit inside the grid. side 0 is the vertical (left) shore,
/// side 1 the horizontal (right) shore.
struct QubitCoord {
  std::size_t row = 0;
  std::size_t col = 0;
  std::size_t side = 0;
  std::size_t index = 0;
};

/// Inoperable qubits and couplers; couplers are stored with first < second.
struct HardwareMask {
  std::set<std::size_t> qubits;
  std::set<QubitPair> couplers;
};

/// rows x cols grid of K_{4,4} unit cells. Vertical qubits couple to the
/// same-index vertical qubit one row down, horizontal qubits to the
/// same-index horizontal qubit one column right.
class HardwareGraph {
 public:
  HardwareGraph(std::size_t rows, std::size_t cols, HardwareMask mask);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  /// Size of the index space, 8 * rows * cols, including masked qubits.
  std::size_t num_qubits() const noexcept { return adjacency_.size(); }
  std::size_t num_active_qubits() const noexcept { return num_qubits() - mask_.qubits.size(); }
  std::size_t num_couplers() const noexcept { return num_couplers_; }
  bool is_perfect() const noexcept { return mask_.qubits.empty() && mask_.couplers.empty(); }
  const HardwareMask& mask() const noexcept { return mask_; }

  std::size_t linear_index(std::size_t row, std::size_t col, std::size_t side, std::size_t index) const;
  QubitCoord coord(std::size_t qubit) const;

  bool is_active(std::size_t qubit) const;
  bool has_coupler(std::size_t p, std::size_t q) const;
  /// Active neighbours of an active qubit, ascending.
  const std::vector<std::size_t>& neighbors(std::size_t qubit) const { return adjacency_.at(qubit); }
  /// All active couplers as (p, q) with p < q, ascending.
  std::vector<QubitPair> couplers() const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  HardwareMask mask_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::size_t num_couplers_ = 0;
};

/// Throws IndexOutOfRange for masked indices outside the grid and
/// InvalidArgument for an empty grid.
HardwareGraph build_chimera(std::size_t rows, std::size_t cols, HardwareMask mask = {});

/// Logical qubit i is represented by the physical qubits chains[i].
struct Embedding {
  std::vector<std::vector<std::size_t>> chains;

  std::size_t num_logical() const noexcept { return chains.size(); }
  std::size_t num_physical() const;
  std::size_t max_chain_length() const;
};

/// Describes the first violated invariant, or returns an empty string when
/// chains are nonempty, disjoint, active, connected, and every pair in
/// `required` is joined by at least one active coupler.
std::string embedding_defect(const Embedding& embedding, const HardwareGraph& graph,
                             std::span<const QubitPair> required);
/// embedding_defect with every logical pair required.
std::string clique_defect(const Embedding& embedding, const HardwareGraph& graph);

/// Largest complete graph the diagonal construction fits on the graph: 4m + 1
/// for m = min(rows, cols).
std::size_t clique_capacity(const HardwareGraph& graph);

/// Complete-graph minor embedding of K_n.
///
/// Logical qubit 4i + k owns horizontal qubit k of row i in columns 0..i and
/// vertical qubit k of column i from row i down to the last row in use, so
/// blocks i < j meet in cell (j, i) and a block meets itself in cell (i, i).
/// When n = 4m + 1 the last logical qubit is the otherwise unused cells just
/// above the diagonal, strung together through the cells two places above
/// it. Chains are then trimmed greedily of qubits that no contact needs.
///
/// Throws TooManyLogicalQubits when n > clique_capacity(graph) and
/// UnsupportedMask when masked hardware breaks the construction.
Embedding embed_complete(std::size_t n, const HardwareGraph& graph);

class ChainStrength {
 public:
  explicit ChainStrength(double xi);
  double value() const noexcept { return xi_; }

 private:
  double xi_;
};

/// Physical problem over the embedding's qubits. Local variable v is the
/// physical qubit qubits[v] and belongs to chain chain_of[v].
struct EmbeddedIsing {
  IsingProblem physical;
  std::vector<std::size_t> qubits;
  std::vector<std::size_t> chain_of;
  std::size_t chain_couplers = 0;
};

/// Splits h_i equally over chain i, puts J_ij on the lowest-indexed coupler
/// joining chains i and j, and sets every intra-chain coupler to -xi.
/// Throws EmbeddingMismatch when the chain count differs from the problem
/// size or a nonzero coupling has no physical coupler.
EmbeddedIsing embed_ising(const IsingProblem& logical, const Embedding& embedding, ChainStrength xi,
                          const HardwareGraph& graph);

/// Majority vote per chain over spins indexed by physical qubit; ties give -1.
std::vector<Spin> unembed(std::span<const Spin> physical_spins, const Embedding& embedding);
std::size_t count_broken_chains(std::span<const Spin> physical_spins, const Embedding& embedding);

/// Ten chain strengths spaced geometrically over [0.5 M, 5 M], M the largest
/// absolute logical coefficient (1 for an all-zero problem).
std::vector<double> default_chain_strengths(const IsingProblem& logical);

struct EmbeddedSolveResult {
  SolveResult result;
  /// Fraction of broken chains over all reads, per chain strength.
  std::vector<double> chain_break_fraction;
};

/// Anneals the embedded problem once per chain strength with schedule.reads
/// reads each (read r of strength x uses substream x * reads + r), unembeds
/// every read and keeps the lowest logical energy.
EmbeddedSolveResult solve_embedded(const IsingProblem& logical, const Embedding& embedding,
                                   const HardwareGraph& graph, std::span<const double> xi_list,
                                   const AnnealSchedule& schedule);

/// Mask file: one `q <index>` line per inoperable qubit and one `c <i> <j>`
/// line per inoperable coupler. Blank lines and `#` comments are ignored.
HardwareMask read_mask_file(const std::filesystem::path& path);
void write_mask_file(const std::filesystem::path& path, const HardwareMask& mask);

}  // namespace qsc::chimera

#endif  // QSC_CHIMERA_HPP

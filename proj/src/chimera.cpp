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

#include "qsc/chimera.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>


namespace qsc::chimera {
namespace {

constexpr std::size_t kCellSize = 2 * kShore;
constexpr long kUnowned = -1;

QubitPair ordered(std::size_t p, std::size_t q) { return p < q ? QubitPair{p, q} : QubitPair{q, p}; }

// Couplers of the perfect graph, each listed once.
template <class Fn>
void for_each_perfect_coupler(std::size_t rows, std::size_t cols, Fn&& fn) {
  auto index = [cols](std::size_t r, std::size_t c, std::size_t side, std::size_t k) {
    return ((r * cols + c) * 2 + side) * kShore + k;
  };
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      for (std::size_t k = 0; k < kShore; ++k) {
        for (std::size_t l = 0; l < kShore; ++l) fn(index(r, c, 0, k), index(r, c, 1, l));
        if (r + 1 < rows) fn(index(r, c, 0, k), index(r + 1, c, 0, k));
        if (c + 1 < cols) fn(index(r, c, 1, k), index(r, c + 1, 1, k));
      }
    }
  }
}

std::vector<long> owners(const Embedding& embedding, std::size_t num_qubits) {
  std::vector<long> owner(num_qubits, kUnowned);
  for (std::size_t c = 0; c < embedding.chains.size(); ++c) {
    for (auto q : embedding.chains[c]) {
      if (q < num_qubits) owner[q] = static_cast<long>(c);
    }
  }
  return owner;
}

// True when chain `chain` stays connected after dropping `skip` (pass a value
// outside the chain to test the chain as is).
bool chain_connected(const std::vector<std::size_t>& chain, std::size_t skip, long id,
                     const std::vector<long>& owner, const HardwareGraph& graph) {
  std::size_t start = graph.num_qubits();
  std::size_t members = 0;
  for (auto q : chain) {
    if (q == skip) continue;
    ++members;
    if (start == graph.num_qubits()) start = q;
  }
  if (members == 0) return false;
  std::vector<std::size_t> stack{start};
  std::set<std::size_t> seen{start};
  while (!stack.empty()) {
    const auto q = stack.back();
    stack.pop_back();
    for (auto nb : graph.neighbors(q)) {
      if (nb == skip || owner[nb] != id || seen.contains(nb)) continue;
      seen.insert(nb);
      stack.push_back(nb);
    }
  }
  return seen.size() == members;
}

// Removes qubits whose chain stays connected and keeps at least one coupler
// to every other chain without them. Deterministic: chains in order, qubits
// from the highest index down, repeated until a full pass removes nothing.
void trim_chains(Embedding& embedding, const HardwareGraph& graph) {
  const std::size_t n = embedding.chains.size();
  auto owner = owners(embedding, graph.num_qubits());
  std::vector<int> contacts(n * n, 0);
  for (const auto& [p, q] : graph.couplers()) {
    const long a = owner[p];
    const long b = owner[q];
    if (a == kUnowned || b == kUnowned || a == b) continue;
    ++contacts[static_cast<std::size_t>(a) * n + static_cast<std::size_t>(b)];
    ++contacts[static_cast<std::size_t>(b) * n + static_cast<std::size_t>(a)];
  }

  std::map<std::size_t, int> loss;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t c = 0; c < n; ++c) {
      auto& chain = embedding.chains[c];
      const long id = static_cast<long>(c);
      const std::vector<std::size_t> candidates(chain.rbegin(), chain.rend());
      for (auto q : candidates) {
        if (chain.size() == 1) break;
        loss.clear();
        for (auto nb : graph.neighbors(q)) {
          if (owner[nb] != kUnowned && owner[nb] != id) ++loss[static_cast<std::size_t>(owner[nb])];
        }
        const bool keeps_contacts = std::all_of(loss.begin(), loss.end(), [&](const auto& entry) {
          return contacts[c * n + entry.first] > entry.second;
        });
        if (!keeps_contacts || !chain_connected(chain, q, id, owner, graph)) continue;
        for (const auto& [d, k] : loss) {
          contacts[c * n + d] -= k;
          contacts[d * n + c] -= k;
        }
        owner[q] = kUnowned;
        chain.erase(std::find(chain.begin(), chain.end(), q));
        changed = true;
      }
    }
  }
}

}  // namespace

HardwareGraph::HardwareGraph(std::size_t rows, std::size_t cols, HardwareMask mask)
    : rows_(rows), cols_(cols), mask_(std::move(mask)) {
  if (rows == 0 || cols == 0) throw Error(ErrorCode::InvalidArgument, "Chimera grid needs rows, cols >= 1");
  const std::size_t total = rows * cols * kCellSize;
  for (auto q : mask_.qubits) {
    if (q >= total) throw Error(ErrorCode::IndexOutOfRange, "masked qubit " + std::to_string(q) + " outside grid");
  }
  std::set<QubitPair> perfect;
  for_each_perfect_coupler(rows, cols, [&](std::size_t p, std::size_t q) { perfect.insert(ordered(p, q)); });
  std::set<QubitPair> masked_couplers;
  for (const auto& [p, q] : mask_.couplers) {
    const auto pair = ordered(p, q);
    if (!perfect.contains(pair)) {
      throw Error(ErrorCode::IndexOutOfRange,
                  "masked coupler (" + std::to_string(p) + ", " + std::to_string(q) + ") is not in the grid");
    }
    masked_couplers.insert(pair);
  }
  mask_.couplers = std::move(masked_couplers);

  adjacency_.assign(total, {});
  for (const auto& [p, q] : perfect) {
    if (mask_.qubits.contains(p) || mask_.qubits.contains(q) || mask_.couplers.contains({p, q})) continue;
    adjacency_[p].push_back(q);
    adjacency_[q].push_back(p);
    ++num_couplers_;
  }
  for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
}

std::size_t HardwareGraph::linear_index(std::size_t row, std::size_t col, std::size_t side,
                                        std::size_t index) const {
  if (row >= rows_ || col >= cols_ || side > 1 || index >= kShore) {
    throw Error(ErrorCode::IndexOutOfRange, "qubit coordinate outside grid");
  }
  return ((row * cols_ + col) * 2 + side) * kShore + index;
}

QubitCoord HardwareGraph::coord(std::size_t qubit) const {
  if (qubit >= num_qubits()) throw Error(ErrorCode::IndexOutOfRange, "qubit outside grid");
  QubitCoord c;
  c.index = qubit % kShore;
  c.side = (qubit / kShore) % 2;
  const std::size_t cell = qubit / kCellSize;
  c.row = cell / cols_;
  c.col = cell % cols_;
  return c;
}

bool HardwareGraph::is_active(std::size_t qubit) const {
  return qubit < num_qubits() && !mask_.qubits.contains(qubit);
}

bool HardwareGraph::has_coupler(std::size_t p, std::size_t q) const {
  if (p >= num_qubits() || q >= num_qubits()) return false;
  const auto& nbrs = adjacency_[p];
  return std::binary_search(nbrs.begin(), nbrs.end(), q);
}

std::vector<QubitPair> HardwareGraph::couplers() const {
  std::vector<QubitPair> out;
  out.reserve(num_couplers_);
  for (std::size_t p = 0; p < adjacency_.size(); ++p) {
    for (auto q : adjacency_[p]) {
      if (p < q) out.emplace_back(p, q);
    }
  }
  return out;
}

HardwareGraph build_chimera(std::size_t rows, std::size_t cols, HardwareMask mask) {
  return HardwareGraph(rows, cols, std::move(mask));
}

std::size_t Embedding::num_physical() const {
  std::size_t total = 0;
  for (const auto& c : chains) total += c.size();
  return total;
}

std::size_t Embedding::max_chain_length() const {
  std::size_t longest = 0;
  for (const auto& c : chains) longest = std::max(longest, c.size());
  return longest;
}

std::string embedding_defect(const Embedding& embedding, const HardwareGraph& graph,
                             std::span<const QubitPair> required) {
  const std::size_t n = embedding.chains.size();
  std::vector<long> owner(graph.num_qubits(), kUnowned);
  for (std::size_t c = 0; c < n; ++c) {
    const auto& chain = embedding.chains[c];
    if (chain.empty()) return "chain " + std::to_string(c) + " is empty";
    for (auto q : chain) {
      if (!graph.is_active(q)) return "chain " + std::to_string(c) + " uses inactive qubit " + std::to_string(q);
      if (owner[q] != kUnowned) return "qubit " + std::to_string(q) + " is shared by two chains";
      owner[q] = static_cast<long>(c);
    }
  }
  for (std::size_t c = 0; c < n; ++c) {
    if (!chain_connected(embedding.chains[c], graph.num_qubits(), static_cast<long>(c), owner, graph)) {
      return "chain " + std::to_string(c) + " is disconnected";
    }
  }
  std::set<QubitPair> touching;
  for (const auto& [p, q] : graph.couplers()) {
    const long a = owner[p];
    const long b = owner[q];
    if (a == kUnowned || b == kUnowned || a == b) continue;
    touching.insert(ordered(static_cast<std::size_t>(a), static_cast<std::size_t>(b)));
  }
  for (const auto& [i, j] : required) {
    if (i >= n || j >= n) return "required pair refers to a missing chain";
    if (i != j && !touching.contains(ordered(i, j))) {
      return "chains " + std::to_string(i) + " and " + std::to_string(j) + " share no coupler";
    }
  }
  return {};
}

std::string clique_defect(const Embedding& embedding, const HardwareGraph& graph) {
  std::vector<QubitPair> pairs;
  const std::size_t n = embedding.chains.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  return embedding_defect(embedding, graph, pairs);
}

std::size_t clique_capacity(const HardwareGraph& graph) {
  return kShore * std::min(graph.rows(), graph.cols()) + 1;
}

Embedding embed_complete(std::size_t n, const HardwareGraph& graph) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "cannot embed an empty clique");
  if (n > clique_capacity(graph)) {
    throw Error(ErrorCode::TooManyLogicalQubits,
                std::to_string(n) + " logical qubits exceed the capacity " + std::to_string(clique_capacity(graph)));
  }
  // Smallest square sub-grid that holds K_n.
  std::size_t m = 1;
  while (kShore * m + 1 < n) ++m;
  const bool extra = n == kShore * m + 1;
  const std::size_t native = extra ? kShore * m : n;
  const std::size_t last_row = (native - 1) / kShore;

  Embedding emb;
  emb.chains.resize(n);
  for (std::size_t v = 0; v < native; ++v) {
    const std::size_t block = v / kShore;
    const std::size_t k = v % kShore;
    auto& chain = emb.chains[v];
    for (std::size_t c = 0; c <= block; ++c) chain.push_back(graph.linear_index(block, c, 1, k));
    for (std::size_t r = block; r <= last_row; ++r) chain.push_back(graph.linear_index(r, block, 0, k));
  }

  if (extra) {
    auto& chain = emb.chains[n - 1];
    if (m == 1) {
      // K_5 inside one cell: the last native chain gives up its horizontal qubit.
      const std::size_t h = graph.linear_index(0, 0, 1, kShore - 1);
      auto& donor = emb.chains[kShore - 1];
      donor.erase(std::find(donor.begin(), donor.end(), h));
      chain.push_back(h);
    } else {
      for (std::size_t r = 0; r + 1 < m; ++r) {
        for (std::size_t side = 0; side < 2; ++side) {
          for (std::size_t k = 0; k < kShore; ++k) chain.push_back(graph.linear_index(r, r + 1, side, k));
        }
        if (r + 2 < m) {
          chain.push_back(graph.linear_index(r, r + 2, 1, 0));
          chain.push_back(graph.linear_index(r, r + 2, 0, 0));
        }
      }
    }
  }
  for (auto& chain : emb.chains) std::sort(chain.begin(), chain.end());

  // Trimming needs the perfect layout intact; any defect here is the mask's.
  if (const auto defect = clique_defect(emb, graph); !defect.empty()) {
    throw Error(ErrorCode::UnsupportedMask, "masked hardware breaks the clique layout: " + defect);
  }
  trim_chains(emb, graph);
  return emb;
}

ChainStrength::ChainStrength(double xi) : xi_(xi) {
  if (!(xi > 0.0) || !std::isfinite(xi)) throw Error(ErrorCode::InvalidArgument, "chain strength must be > 0");
}

EmbeddedIsing embed_ising(const IsingProblem& logical, const Embedding& embedding, ChainStrength xi,
                          const HardwareGraph& graph) {
  const std::size_t n = logical.size();
  if (embedding.num_logical() != n) {
    throw Error(ErrorCode::EmbeddingMismatch, "embedding has " + std::to_string(embedding.num_logical()) +
                                                  " chains for " + std::to_string(n) + " logical qubits");
  }
  const auto owner = owners(embedding, graph.num_qubits());

  EmbeddedIsing out;
  for (std::size_t c = 0; c < n; ++c) {
    if (embedding.chains[c].empty()) throw Error(ErrorCode::EmbeddingMismatch, "empty chain");
    for (auto q : embedding.chains[c]) {
      if (!graph.is_active(q)) throw Error(ErrorCode::EmbeddingMismatch, "chain uses an inactive qubit");
      out.qubits.push_back(q);
    }
  }
  std::sort(out.qubits.begin(), out.qubits.end());
  std::vector<std::size_t> local(graph.num_qubits(), 0);
  out.chain_of.resize(out.qubits.size());
  for (std::size_t v = 0; v < out.qubits.size(); ++v) {
    local[out.qubits[v]] = v;
    out.chain_of[v] = static_cast<std::size_t>(owner[out.qubits[v]]);
  }

  Vector h = Vector::Zero(static_cast<Eigen::Index>(out.qubits.size()));
  for (std::size_t c = 0; c < n; ++c) {
    const auto& chain = embedding.chains[c];
    const double share = logical.linear()[static_cast<Eigen::Index>(c)] / static_cast<double>(chain.size());
    for (auto q : chain) h[static_cast<Eigen::Index>(local[q])] = share;
  }

  std::vector<Coupling> couplings;
  for (const auto& lc : logical.quadratic()) {
    if (lc.value == 0.0) continue;
    bool found = false;
    QubitPair best{};
    for (auto p : embedding.chains[lc.i]) {
      for (auto q : graph.neighbors(p)) {
        if (owner[q] != static_cast<long>(lc.j)) continue;
        const auto pair = ordered(p, q);
        if (!found || pair < best) best = pair;
        found = true;
      }
    }
    if (!found) {
      throw Error(ErrorCode::EmbeddingMismatch,
                  "no coupler joins chains " + std::to_string(lc.i) + " and " + std::to_string(lc.j));
    }
    couplings.push_back({local[best.first], local[best.second], lc.value});
  }
  for (const auto& [p, q] : graph.couplers()) {
    if (owner[p] == kUnowned || owner[p] != owner[q]) continue;
    couplings.push_back({local[p], local[q], -xi.value()});
    ++out.chain_couplers;
  }
  out.physical = IsingProblem(std::move(h), std::move(couplings), logical.offset());
  return out;
}

std::vector<Spin> unembed(std::span<const Spin> physical_spins, const Embedding& embedding) {
  std::vector<Spin> logical(embedding.num_logical());
  for (std::size_t c = 0; c < logical.size(); ++c) {
    long vote = 0;
    for (auto q : embedding.chains[c]) vote += physical_spins[q];
    logical[c] = vote > 0 ? Spin{1} : Spin{-1};
  }
  return logical;
}

std::size_t count_broken_chains(std::span<const Spin> physical_spins, const Embedding& embedding) {
  std::size_t broken = 0;
  for (const auto& chain : embedding.chains) {
    const Spin first = physical_spins[chain.front()];
    if (std::any_of(chain.begin(), chain.end(), [&](std::size_t q) { return physical_spins[q] != first; })) {
      ++broken;
    }
  }
  return broken;
}

std::vector<double> default_chain_strengths(const IsingProblem& logical) {
  double scale = logical.max_abs_coefficient();
  if (scale == 0.0) scale = 1.0;
  constexpr int kCount = 10;
  std::vector<double> out(kCount);
  for (int i = 0; i < kCount; ++i) {
    out[i] = 0.5 * scale * std::pow(10.0, static_cast<double>(i) / (kCount - 1));
  }
  return out;
}

EmbeddedSolveResult solve_embedded(const IsingProblem& logical, const Embedding& embedding,
                                   const HardwareGraph& graph, std::span<const double> xi_list,
                                   const AnnealSchedule& schedule) {
  if (xi_list.empty()) throw Error(ErrorCode::InvalidArgument, "need at least one chain strength");
  schedule.validate();

  EmbeddedSolveResult out;
  auto& result = out.result;
  result.reads_taken = xi_list.size() * schedule.reads;
  result.all_energies.reserve(result.reads_taken);
  std::vector<Spin> physical(graph.num_qubits(), Spin{-1});

  for (std::size_t x = 0; x < xi_list.size(); ++x) {
    const auto embedded = embed_ising(logical, embedding, ChainStrength(xi_list[x]), graph);
    const auto samples = anneal_ising(embedded.physical, schedule, x * schedule.reads);
    std::size_t broken = 0;
    for (const auto& sample : samples) {
      for (std::size_t v = 0; v < sample.size(); ++v) physical[embedded.qubits[v]] = sample[v];
      broken += count_broken_chains(physical, embedding);
      const auto spins = unembed(physical, embedding);
      const double e = ising_energy(logical, spins);
      SparseCode code = from_spins(spins);
      result.all_energies.push_back(e);
      if (result.all_energies.size() == 1 || better_candidate(e, code, result.best_energy, result.best_code)) {
        result.best_energy = e;
        result.best_code = std::move(code);
      }
    }
    out.chain_break_fraction.push_back(
        static_cast<double>(broken) / static_cast<double>(samples.size() * std::max<std::size_t>(1, logical.size())));
  }
  return out;
}

HardwareMask read_mask_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open mask file " + path.string());
  HardwareMask mask;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string kind;
    if (!(fields >> kind)) continue;
    auto fail = [&] {
      return Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) + ": malformed mask entry");
    };
    long long a = -1;
    long long b = -1;
    std::string trailing;
    if (kind == "q") {
      if (!(fields >> a) || a < 0 || (fields >> trailing)) throw fail();
      mask.qubits.insert(static_cast<std::size_t>(a));
    } else if (kind == "c") {
      if (!(fields >> a >> b) || a < 0 || b < 0 || (fields >> trailing)) throw fail();
      mask.couplers.insert(ordered(static_cast<std::size_t>(a), static_cast<std::size_t>(b)));
    } else {
      throw fail();
    }
  }
  return mask;
}

void write_mask_file(const std::filesystem::path& path, const HardwareMask& mask) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write mask file " + path.string());
  for (auto q : mask.qubits) out << "q " << q << '\n';
  for (const auto& [p, q] : mask.couplers) out << "c " << p << ' ' << q << '\n';
}

}  // namespace qsc::chimera

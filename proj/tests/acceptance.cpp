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

// Acceptance runner. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails. Pass criterion numbers to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qsc/chimera.hpp"
#include "qsc/cli.hpp"
#include "qsc/data.hpp"
#include "qsc/io.hpp"
#include "qsc/learn.hpp"
#include "qsc/qubo.hpp"
#include "qsc/regress.hpp"
#include "test_support.hpp"

namespace {

using namespace qsc;
namespace fs = std::filesystem;
using testing::Gen;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, format, args...);
  return buffer;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : " ") + fmt("%.4f", x);
  return s;
}

// Sparse-coding QUBO instances from a random dictionary and input.
struct ScInstance {
  Dictionary phi;
  Vector x;
  SparsityPenalty lambda;
};

ScInstance sc_instance(Gen& gen, std::size_t n) {
  const std::size_t d = gen.index(1, 12);
  auto phi = gen.dictionary(d, n);
  Vector x = gen.vector(d) * gen.uniform(0.1, 2.0);
  return {std::move(phi), std::move(x), SparsityPenalty(gen.uniform(0.0, 1.0))};
}

Outcome criterion1() {
  Gen gen(1001);
  double worst = 0.0;
  std::size_t argmin_mismatch = 0;
  const std::size_t problems = 1000;
  for (std::size_t k = 0; k < problems; ++k) {
    const std::size_t n = gen.index(1, 12);
    const auto inst = sc_instance(gen, n);
    const auto qubo = build_qubo(inst.phi, inst.x, inst.lambda);
    double best = std::numeric_limits<double>::infinity();
    std::uint64_t best_mask = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      const double e_sc = testing::direct_energy(inst.phi.atoms(), inst.x, mask, inst.lambda.value());
      const double e_q = testing::direct_qubo_energy(qubo, mask);
      worst = std::max(worst, std::abs(e_sc - e_q));
      const auto code = SparseCode::from_mask(mask, n);
      if (e_sc < best - kTieTolerance ||
          (std::abs(e_sc - best) <= kTieTolerance && sparser_first(code, SparseCode::from_mask(best_mask, n)))) {
        best = std::min(best, e_sc);
        best_mask = mask;
      }
    }
    const auto solved = solve_exhaustive(qubo);
    if (!(solved.best_code == SparseCode::from_mask(best_mask, n))) ++argmin_mismatch;
  }
  return {worst < 1e-10 && argmin_mismatch == 0,
          fmt("%zu problems, max |E_qubo - E_sc| = %.3g, argmin mismatches = %zu", problems, worst, argmin_mismatch)};
}

Outcome criterion2() {
  Gen gen(1002);
  double worst = 0.0;
  const std::size_t problems = 200;
  for (std::size_t k = 0; k < problems; ++k) {
    const std::size_t n = gen.index(1, 12);
    const auto qubo = gen.qubo(n);
    const auto ising = qubo_to_ising(qubo);
    const auto back = ising_to_qubo(ising);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      const double e = testing::direct_qubo_energy(qubo, mask);
      worst = std::max(worst, std::abs(e - testing::direct_ising_energy(ising, mask)));
      worst = std::max(worst, std::abs(e - testing::direct_qubo_energy(back, mask)));
    }
  }
  return {worst < 1e-10, fmt("%zu problems, max pointwise difference = %.3g", problems, worst)};
}

Outcome criterion3() {
  Gen gen(1003);
  double worst = 0.0;
  const std::size_t batches = 100;
  const double h = 1e-6;
  for (std::size_t k = 0; k < batches; ++k) {
    const std::size_t d = gen.index(1, 10);
    const std::size_t n = gen.index(1, 10);
    const auto phi = gen.dictionary(d, n);
    const std::size_t b = gen.index(1, 8);
    std::vector<Vector> xs;
    std::vector<SparseCode> codes;
    for (std::size_t s = 0; s < b; ++s) {
      xs.push_back(gen.vector(d));
      SparseCode code(n);
      for (std::size_t i = 0; i < n; ++i) code.set(i, gen.uniform(0.0, 1.0) < 0.5);
      codes.push_back(code);
    }
    const Matrix grad = learn::grad_dictionary(phi, xs, codes);
    // Batch-mean energy straight from the definition; the penalty term does
    // not depend on phi, so lambda = 0.
    auto batch_energy = [&](const Matrix& m) {
      double e = 0.0;
      for (std::size_t s = 0; s < b; ++s) {
        std::uint64_t mask = 0;
        for (std::size_t i = 0; i < n; ++i) mask |= static_cast<std::uint64_t>(codes[s][i]) << i;
        e += testing::direct_energy(m, xs[s], mask, 0.0);
      }
      return e / static_cast<double>(b);
    };
    for (Eigen::Index r = 0; r < grad.rows(); ++r) {
      for (Eigen::Index c = 0; c < grad.cols(); ++c) {
        Matrix plus = phi.atoms();
        Matrix minus = phi.atoms();
        plus(r, c) += h;
        minus(r, c) -= h;
        const double numeric = (batch_energy(plus) - batch_energy(minus)) / (2 * h);
        worst = std::max(worst, std::abs(numeric - grad(r, c)));
      }
    }
  }
  return {worst < 1e-5, fmt("%zu batches, max |analytic - central difference| = %.3g", batches, worst)};
}

Outcome criterion4() {
  Gen gen(1004);
  AnnealSchedule schedule;
  schedule.sweeps = 1000;
  schedule.reads = 20;
  std::size_t hits = 0;
  double worst_excess = 0.0;
  const std::size_t problems = 100;
  for (std::size_t k = 0; k < problems; ++k) {
    const auto qubo = gen.qubo(16);
    schedule.seed = 7000 + k;
    const double optimum = solve_exhaustive(qubo).best_energy;
    const double found = solve_sa(qubo, schedule).best_energy;
    if (found <= optimum + 1e-9 * std::max(1.0, std::abs(optimum))) {
      ++hits;
    } else {
      worst_excess = std::max(worst_excess, (found - optimum) / std::abs(optimum));
    }
  }
  return {hits >= 95 && worst_excess < 0.02,
          fmt("%zu/%zu optima reached, worst relative excess on misses = %.3g", hits, problems, worst_excess)};
}

Outcome criterion5() {
  const auto big = chimera::build_chimera(16, 16);
  bool fits65 = false;
  try {
    fits65 = chimera::clique_defect(chimera::embed_complete(65, big), big).empty();
  } catch (const Error&) {
  }
  bool refuses66 = false;
  try {
    chimera::embed_complete(66, big);
  } catch (const Error& e) {
    refuses66 = e.code() == ErrorCode::TooManyLogicalQubits;
  }
  std::size_t checked = 0;
  std::size_t invalid = 0;
  for (std::size_t m = 1; m <= 16; ++m) {
    const auto graph = chimera::build_chimera(m, m);
    for (std::size_t n = 1; n <= 4 * m + 1; ++n) {
      ++checked;
      try {
        if (!chimera::clique_defect(chimera::embed_complete(n, graph), graph).empty()) ++invalid;
      } catch (const Error&) {
        ++invalid;
      }
    }
  }
  return {fits65 && refuses66 && invalid == 0,
          fmt("K_65 on 16x16 %s, K_66 %s, %zu/%zu embeddings valid for n <= 4m+1, m <= 16", fits65 ? "valid" : "FAILED",
              refuses66 ? "refused" : "NOT refused", checked - invalid, checked)};
}

Outcome criterion6() {
  Gen gen(1006);
  const auto graph = chimera::build_chimera(2, 2);
  const auto embedding = chimera::embed_complete(8, graph);
  AnnealSchedule schedule;
  schedule.reads = 20;
  std::size_t hits = 0;
  const std::size_t problems = 100;
  for (std::size_t k = 0; k < problems; ++k) {
    const auto inst = sc_instance(gen, 8);
    const auto qubo = build_qubo(inst.phi, inst.x, inst.lambda);
    const auto ising = qubo_to_ising(qubo);
    schedule.seed = 9000 + k;
    const auto xi = chimera::default_chain_strengths(ising);
    const auto solved = chimera::solve_embedded(ising, embedding, graph, xi, schedule);
    const double optimum = testing::brute_force_minimum(qubo);
    const double found = qubo_energy(qubo, solved.result.best_code);
    if (found <= optimum + 1e-9 * std::max(1.0, std::abs(optimum))) ++hits;
  }
  return {hits >= 90, fmt("%zu/%zu logical optima reached (10 chain strengths x 20 reads)", hits, problems)};
}

Outcome criterion7() {
  const std::vector<std::pair<double, double>> published = {{20, 0.41},  {29, 0.375}, {38, 0.319},
                                                            {47, 0.29},  {55, 0.273}, {64, 0.254}};
  const auto all = regress::fit_scaling(published);
  const std::vector<std::pair<double, double>> tail(published.begin() + 1, published.end());
  const auto without20 = regress::fit_scaling(tail);
  const bool pass = all.q_infinity >= 0.15 && all.q_infinity <= 0.21 && without20.q_infinity >= 0.20 &&
                    without20.q_infinity <= 0.26;
  return {pass, fmt("Q_inf = %.4f over all six points, %.4f without N_q = 20", all.q_infinity, without20.q_infinity)};
}

// End-to-end runs shared by criteria 8 and 10.
constexpr std::size_t kSeeds = 5;

learn::LearnConfig regression_config(std::uint64_t seed) {
  learn::LearnConfig config;
  config.eta_initial = 0.05;
  config.batch_size = 10;
  config.target_sparsity = 0.2;
  config.seed = seed;
  return config;
}

std::pair<std::vector<Sample>, std::vector<Sample>> synthetic_split(std::size_t n_samples, std::uint64_t seed) {
  data::SyntheticConfig synth;
  synth.n_samples = n_samples;
  synth.seed = seed;
  return data::split(data::gen_synthetic(synth), 0.5, seed);
}

std::vector<Vector> inputs_of(const std::vector<Sample>& samples) {
  std::vector<Vector> xs;
  for (const auto& s : samples) xs.push_back(s.x);
  return xs;
}

double fit_and_score(const std::vector<Sample>& train, const std::vector<Sample>& test, std::size_t n_q,
                     const learn::LearnConfig& config, regress::PretrainSource source) {
  const auto test_x = inputs_of(test);
  const auto model = regress::fit(train, test_x, n_q, config, source);
  return regress::evaluate(model, test).q_value;
}

std::vector<double>& pretrained_q() {
  static std::vector<double> q;
  return q;
}

Outcome criterion8() {
  auto& q = pretrained_q();
  q.clear();
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    const auto [train, test] = synthetic_split(10000, seed);
    q.push_back(fit_and_score(train, test, 20, regression_config(seed), regress::PretrainSource::Combined));
  }
  double mean = 0.0;
  for (double v : q) mean += v;
  mean /= static_cast<double>(q.size());
  double var = 0.0;
  for (double v : q) var += (v - mean) * (v - mean);
  const double sem = std::sqrt(var / static_cast<double>(q.size() - 1) / static_cast<double>(q.size()));
  // One-sided 99% t bound with 4 degrees of freedom.
  const double upper = mean + 3.747 * sem;
  const bool all_below = std::all_of(q.begin(), q.end(), [](double v) { return v < 0.6; });
  return {all_below && upper < 1.0,
          fmt("Q per seed = [%s], mean %.4f, 99%% upper bound %.4f", join(q).c_str(), mean, upper)};
}

Outcome criterion9() {
  const std::vector<std::size_t> nq = {8, 12, 16, 20};
  std::vector<double> medians;
  std::string rows;
  for (std::size_t n_q : nq) {
    std::vector<double> q;
    for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
      const auto [train, test] = synthetic_split(2000, 100 + seed);
      auto config = regression_config(100 + seed);
      config.solver.kind = learn::SolverKind::Annealing;
      config.solver.schedule.sweeps = 200;
      config.solver.schedule.reads = 5;
      q.push_back(fit_and_score(train, test, n_q, config, regress::PretrainSource::Combined));
    }
    medians.push_back(median(q));
  }
  bool monotone = true;
  for (std::size_t i = 1; i < medians.size(); ++i) monotone = monotone && medians[i] <= medians[i - 1];
  return {monotone, fmt("median Q at N_q = 8, 12, 16, 20: [%s]", join(medians).c_str())};
}

Outcome criterion10() {
  if (pretrained_q().size() != kSeeds) criterion8();
  std::vector<double> off;
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    const auto [train, test] = synthetic_split(10000, seed);
    off.push_back(fit_and_score(train, test, 20, regression_config(seed), regress::PretrainSource::Off));
  }
  const double with = median(pretrained_q());
  const double without = median(off);
  return {with <= without, fmt("median Q with pre-training %.4f, without %.4f (without per seed: [%s])", with, without,
                               join(off).c_str())};
}

Outcome criterion11() {
  const fs::path dir = fs::temp_directory_path() / "qsc_acceptance_replay";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto p = [&](const std::string& name) { return (dir / name).string(); };
  std::ostringstream sink;
  auto run = [&](std::vector<std::string> args) { return cli::run(args, sink, sink); };
  const std::vector<std::string> learn = {"--epochs", "3", "--probe-size", "64", "--eta", "0.05", "--batch-size", "10"};
  auto with_learn = [&](std::vector<std::string> args) {
    args.insert(args.end(), learn.begin(), learn.end());
    return args;
  };

  io::write_text_file(p("table.csv"), "n_q,q\n4,0.9\n6,0.8\n8,0.74\n10,0.71\n");
  const std::vector<std::vector<std::string>> commands = {
      {"gen-data", "--n-samples", "400", "--seed", "3", "--out", p("all.csv")},
      {"split", "--in", p("all.csv"), "--train-fraction", "0.5", "--seed", "4", "--train-out", p("train.csv"),
       "--test-out", p("test.csv")},
      with_learn({"fit", "--train", p("train.csv"), "--test", p("test.csv"), "--nq", "8", "--out", p("model")}),
      with_learn({"fit", "--train", p("train.csv"), "--test", p("test.csv"), "--nq", "6", "--solver", "sa",
                  "--sweeps", "100", "--reads", "4", "--out", p("model_sa")}),
      with_learn({"fit", "--train", p("train.csv"), "--nq", "4", "--solver", "embedded-sa", "--sweeps", "100",
                  "--reads", "2", "--chimera-size", "1", "--pretrain", "off", "--out", p("model_emb")}),
      {"predict", "--model", p("model"), "--in", p("test.csv"), "--out", p("pred.csv")},
      {"eval", "--predictions", p("pred.csv"), "--truth", p("test.csv"), "--out", p("report.json")},
      with_learn({"sweep", "--train", p("train.csv"), "--test", p("test.csv"), "--nq", "4,6", "--out", p("sweep.csv")}),
      {"fit-scaling", "--in", p("table.csv"), "--out", p("scaling.json")},
  };
  const std::vector<std::string> manifests = {
      p("all.csv.manifest.json"),  p("train.csv.manifest.json"),     p("model/manifest.json"),
      p("model_sa/manifest.json"), p("model_emb/manifest.json"),     p("pred.csv.manifest.json"),
      p("report.json.manifest.json"), p("sweep.csv.manifest.json"), p("scaling.json.manifest.json")};

  std::size_t reproduced = 0;
  std::size_t files = 0;
  std::string failures;
  for (std::size_t c = 0; c < commands.size(); ++c) {
    if (run(commands[c]) != 0) {
      failures += " " + commands[c][0] + "(run)";
      continue;
    }
    const auto manifest = nlohmann::json::parse(io::read_text_file(manifests[c]));
    std::vector<std::pair<std::string, std::string>> before;
    for (const auto& entry : manifest.at("outputs")) {
      const auto path = entry.at("path").get<std::string>();
      before.emplace_back(path, io::read_text_file(path));
      fs::remove(path);
    }
    // Replay under a different thread count; outputs must not depend on it.
    bool same = run({"--threads", "3", "replay", manifests[c]}) == 0;
    for (const auto& [path, bytes] : before) {
      ++files;
      same = same && fs::exists(path) && io::read_text_file(path) == bytes;
    }
    if (same) {
      ++reproduced;
    } else {
      failures += " " + commands[c][0];
    }
  }
  fs::remove_all(dir);
  return {reproduced == commands.size(),
          fmt("%zu/%zu runs replayed byte-identically (%zu output files)%s%s", reproduced, commands.size(), files,
              failures.empty() ? "" : ", failed:", failures.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2, criterion3,  criterion4,
                                                           criterion5, criterion6, criterion7,  criterion8,
                                                           criterion9, criterion10, criterion11};
  std::set<std::size_t> selected;
  for (int i = 1; i < argc; ++i) {
    const long k = std::strtol(argv[i], nullptr, 10);
    if (k < 1 || k > static_cast<long>(criteria.size())) {
      std::cerr << "usage: qsc_acceptance [criterion 1-" << criteria.size() << "]...\n";
      return 2;
    }
    selected.insert(static_cast<std::size_t>(k));
  }
  bool all_pass = true;
  for (std::size_t k = 1; k <= criteria.size(); ++k) {
    if (!selected.empty() && !selected.contains(k)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[k - 1]();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all_pass = all_pass && outcome.pass;
    std::cout << "criterion " << k << ": " << (outcome.pass ? "PASS" : "FAIL") << "  " << outcome.detail << " ["
              << fmt("%.1f s", seconds) << "]" << std::endl;
  }
  return all_pass ? 0 : 1;
}

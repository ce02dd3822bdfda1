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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "qsc/parallel.hpp"
#include "qsc/qubo.hpp"
#include "test_support.hpp"

namespace qsc {
namespace {

TEST(BuildQubo, IdentityDictionaryHandExpansion) {
  const Dictionary eye(Matrix::Identity(2, 2));
  Vector x(2);
  x << 1.0, 0.0;
  const auto q = build_qubo(eye, x, SparsityPenalty(0.0));
  EXPECT_DOUBLE_EQ(q.offset(), 0.5);
  EXPECT_DOUBLE_EQ(q.linear()[0], -0.5);
  EXPECT_DOUBLE_EQ(q.linear()[1], 0.5);
  ASSERT_LE(q.quadratic().size(), 1u);
  if (!q.quadratic().empty()) EXPECT_EQ(q.quadratic().front().value, 0.0);
}

TEST(BuildQubo, ZeroInputHasPositiveLinearTermsAndEmptyMinimiser) {
  testing::Gen gen(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto phi = gen.dictionary(5, 7);
    const auto q = build_qubo(phi, Vector::Zero(5), SparsityPenalty(0.05));
    for (Eigen::Index i = 0; i < 7; ++i) EXPECT_GT(q.linear()[i], 0.0);
    EXPECT_EQ(solve_exhaustive(q).best_code.count_ones(), 0u);
  }
}

TEST(BuildQubo, MatchesDirectEnergyOnEveryCode) {
  testing::Gen gen(4);
  const auto phi = gen.dictionary(4, 6);
  const Vector x = gen.vector(4);
  const auto q = build_qubo(phi, x, SparsityPenalty(0.3));
  for (std::uint64_t mask = 0; mask < 64; ++mask) {
    EXPECT_NEAR(qubo_energy(q, SparseCode::from_mask(mask, 6)), testing::direct_energy(phi.atoms(), x, mask, 0.3),
                1e-10);
  }
}

TEST(BuildQubo, DimensionMismatch) {
  testing::Gen gen(5);
  EXPECT_THROW(build_qubo(gen.dictionary(3, 2), Vector::Zero(4), SparsityPenalty(0.1)), Error);
}

TEST(QuadraticModel, ValidatesCouplings) {
  EXPECT_THROW(QuboProblem(Vector::Zero(2), {{1, 0, 1.0}}, 0.0), Error);
  EXPECT_THROW(QuboProblem(Vector::Zero(2), {{0, 2, 1.0}}, 0.0), Error);
  EXPECT_THROW(QuboProblem(Vector::Zero(3), {{0, 1, 1.0}, {0, 1, 2.0}}, 0.0), Error);
  const QuboProblem sorted(Vector::Zero(3), {{1, 2, 1.0}, {0, 2, 2.0}}, 0.0);
  EXPECT_EQ(sorted.quadratic().front().i, 0u);
  EXPECT_DOUBLE_EQ(sorted.max_abs_coefficient(), 2.0);
  const Matrix sym = sorted.symmetric_couplings();
  EXPECT_EQ(sym(2, 0), 2.0);
  EXPECT_EQ(sym(0, 2), 2.0);
  EXPECT_EQ(sym(1, 1), 0.0);
}

TEST(Energies, HandExamples) {
  const QuboProblem q(Vector::Constant(2, -1.0), {{0, 1, 3.0}}, 0.0);
  EXPECT_DOUBLE_EQ(qubo_energy(q, SparseCode::from_mask(0b11, 2)), 1.0);
  const QuboProblem zero(3);
  const IsingProblem zero_ising(3);
  EXPECT_EQ(qubo_energy(zero, SparseCode::from_mask(0b101, 3)), 0.0);
  const std::vector<Spin> spins = {1, -1, 1};
  EXPECT_EQ(ising_energy(zero_ising, spins), 0.0);
  EXPECT_THROW(qubo_energy(zero, SparseCode(2)), Error);
  const std::vector<Spin> short_spins = {1};
  EXPECT_THROW(ising_energy(zero_ising, short_spins), Error);
}

TEST(IsingConversion, SingleVariableHandComputation) {
  const QuboProblem q(Vector::Constant(1, 1.0), {}, 0.0);
  const auto ising = qubo_to_ising(q);
  EXPECT_DOUBLE_EQ(ising.linear()[0], 0.5);
  EXPECT_DOUBLE_EQ(ising.offset(), 0.5);
  const std::vector<Spin> down = {-1};
  const std::vector<Spin> up = {1};
  EXPECT_DOUBLE_EQ(ising_energy(ising, down), 0.0);
  EXPECT_DOUBLE_EQ(ising_energy(ising, up), 1.0);
}

TEST(IsingConversion, ZeroProblemStaysZero) {
  const auto ising = qubo_to_ising(QuboProblem(4));
  EXPECT_EQ(ising.offset(), 0.0);
  EXPECT_TRUE(ising.linear().isZero());
  for (const auto& c : ising.quadratic()) EXPECT_EQ(c.value, 0.0);
}

TEST(IsingConversion, PointwiseEqualityAndRoundTrip) {
  testing::Gen gen(6);
  for (int trial = 0; trial < 30; ++trial) {
    const auto n = gen.index(1, 8);
    const auto q = gen.qubo(n);
    const auto ising = qubo_to_ising(q);
    const auto back = ising_to_qubo(ising);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      const double reference = testing::direct_qubo_energy(q, mask);
      EXPECT_NEAR(testing::direct_ising_energy(ising, mask), reference, 1e-10);
      EXPECT_NEAR(testing::direct_qubo_energy(back, mask), reference, 1e-10);
      const auto code = SparseCode::from_mask(mask, n);
      EXPECT_EQ(from_spins(to_spins(code)), code);
    }
  }
}

TEST(Exhaustive, HandExampleAndLimits) {
  const Dictionary eye(Matrix::Identity(3, 3));
  Vector x(3);
  x << 1.0, 1.0, 0.0;
  const auto result = solve_exhaustive(build_qubo(eye, x, SparsityPenalty(0.1)));
  EXPECT_EQ(result.best_code, SparseCode::from_mask(0b011, 3));
  EXPECT_NEAR(result.best_energy, 0.2, 1e-12);
  EXPECT_EQ(result.reads_taken, 1u);

  try {
    solve_exhaustive(QuboProblem(30));
    FAIL() << "expected TooLarge";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooLarge);
  }
}

TEST(Exhaustive, TieBreakPrefersSparserThenLexicographicallySmaller) {
  // Every code has energy 0.
  EXPECT_EQ(solve_exhaustive(QuboProblem(5)).best_code.count_ones(), 0u);
  // a_0 and a_1 each reach -1 alone; together +1. (0, 1) precedes (1, 0).
  const QuboProblem pair(Vector::Constant(2, -1.0), {{0, 1, 3.0}}, 0.0);
  EXPECT_EQ(solve_exhaustive(pair).best_code, SparseCode::from_mask(0b10, 2));
  // {a_1} and {a_0, a_2} both reach -1: fewer ones wins.
  const QuboProblem three(Vector{{-0.5, -1.0, -0.5}}, {{0, 1, 5.0}, {1, 2, 5.0}}, 0.0);
  EXPECT_EQ(solve_exhaustive(three).best_code, SparseCode::from_mask(0b010, 3));
}

TEST(Exhaustive, AgreesWithBruteForceAcrossSizes) {
  testing::Gen gen(7);
  for (std::size_t n = 1; n <= 16; ++n) {
    for (int trial = 0; trial < 3; ++trial) {
      const auto q = gen.qubo(n);
      const auto result = solve_exhaustive(q);
      const double reference = testing::brute_force_minimum(q);
      EXPECT_NEAR(result.best_energy, reference, 1e-9 * std::max(1.0, std::abs(reference))) << "n=" << n;
      EXPECT_NEAR(result.best_energy, qubo_energy(q, result.best_code), 1e-10);
    }
  }
}

TEST(Exhaustive, MinimiserAgreesWithDirectSparseCodingArgmin) {
  testing::Gen gen(8);
  for (int trial = 0; trial < 40; ++trial) {
    const auto n = gen.index(1, 10);
    const auto phi = gen.dictionary(gen.index(1, 6), n);
    const Vector x = gen.vector(phi.input_dim());
    const double lambda = gen.uniform(0.0, 0.5);
    const auto result = solve_exhaustive(build_qubo(phi, x, SparsityPenalty(lambda)));
    double best = std::numeric_limits<double>::infinity();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      best = std::min(best, testing::direct_energy(phi.atoms(), x, mask, lambda));
    }
    EXPECT_NEAR(sc_energy(phi, x, result.best_code, SparsityPenalty(lambda)), best, 1e-10);
  }
}

TEST(Exhaustive, OnesNonIncreasingInLambda) {
  testing::Gen gen(9);
  for (int trial = 0; trial < 40; ++trial) {
    const auto phi = gen.dictionary(6, 10);
    const Vector x = gen.vector(6) * 2.0;
    std::size_t previous = 11;
    for (double lambda : {0.0, 0.05, 0.1, 0.2, 0.4, 0.8, 1.6, 3.2}) {
      const auto ones = solve_exhaustive(build_qubo(phi, x, SparsityPenalty(lambda))).best_code.count_ones();
      EXPECT_LE(ones, previous) << "lambda=" << lambda;
      previous = ones;
    }
  }
}

TEST(AnnealSchedule, Validation) {
  AnnealSchedule s;
  EXPECT_NO_THROW(s.validate());
  s.sweeps = 0;
  EXPECT_THROW(s.validate(), Error);
  s = {};
  s.reads = 0;
  EXPECT_THROW(s.validate(), Error);
  s = {};
  s.beta_initial = 20.0;
  EXPECT_THROW(s.validate(), Error);
  s = {};
  s.beta_initial = 0.0;
  EXPECT_THROW(s.validate(), Error);
  s = {};
  EXPECT_DOUBLE_EQ(s.beta_at(0), s.beta_initial);
  EXPECT_NEAR(s.beta_at(s.sweeps - 1), s.beta_final, 1e-12);
}

TEST(SimulatedAnnealing, ZeroProblemAndDeterminism) {
  AnnealSchedule schedule;
  schedule.sweeps = 50;
  schedule.reads = 5;
  schedule.seed = 17;
  const auto zero = solve_sa(QuboProblem(6), schedule);
  EXPECT_EQ(zero.best_energy, 0.0);
  EXPECT_EQ(zero.reads_taken, 5u);
  EXPECT_EQ(zero.all_energies.size(), 5u);

  testing::Gen gen(10);
  const auto q = gen.qubo(12);
  const auto a = solve_sa(q, schedule);
  const auto b = solve_sa(q, schedule);
  EXPECT_EQ(a.best_code, b.best_code);
  EXPECT_EQ(a.all_energies, b.all_energies);
  EXPECT_EQ(a.best_energy, *std::min_element(a.all_energies.begin(), a.all_energies.end()));
  EXPECT_NEAR(a.best_energy, qubo_energy(q, a.best_code), 1e-10);
}

TEST(SimulatedAnnealing, ThreadCountDoesNotChangeResults) {
  testing::Gen gen(11);
  const auto q = gen.qubo(14);
  AnnealSchedule schedule;
  schedule.sweeps = 100;
  schedule.reads = 8;
  schedule.seed = 3;
  const auto saved = thread_count();
  set_thread_count(1);
  const auto serial = solve_sa(q, schedule);
  set_thread_count(4);
  const auto threaded = solve_sa(q, schedule);
  set_thread_count(saved);
  EXPECT_EQ(serial.all_energies, threaded.all_energies);
  EXPECT_EQ(serial.best_code, threaded.best_code);
}

TEST(SimulatedAnnealing, NeverBeatsTheExactOptimum) {
  testing::Gen gen(12);
  AnnealSchedule schedule;
  schedule.sweeps = 200;
  schedule.reads = 4;
  for (int trial = 0; trial < 30; ++trial) {
    const auto q = gen.qubo(gen.index(1, 12));
    schedule.seed = static_cast<std::uint64_t>(trial);
    const double exact = solve_exhaustive(q).best_energy;
    EXPECT_GE(solve_sa(q, schedule).best_energy, exact - 1e-9 * std::max(1.0, std::abs(exact)));
  }
}

TEST(SimulatedAnnealing, ReadsAreIndependentSubstreams) {
  testing::Gen gen(13);
  const auto ising = qubo_to_ising(gen.qubo(10));
  AnnealSchedule schedule;
  schedule.sweeps = 30;
  schedule.reads = 6;
  schedule.seed = 99;
  const auto all = anneal_ising(ising, schedule);
  schedule.reads = 2;
  const auto tail = anneal_ising(ising, schedule, 4);
  ASSERT_EQ(all.size(), 6u);
  EXPECT_EQ(tail[0], all[4]);
  EXPECT_EQ(tail[1], all[5]);
}

}  // namespace
}  // namespace qsc

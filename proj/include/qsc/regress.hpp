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

#ifndef QSC_REGRESS_HPP
#define QSC_REGRESS_HPP

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "qsc/core.hpp"
#include "qsc/learn.hpp"

namespace qsc::regress {

/// Which inputs the x-only dictionary is learned from before y is appended.
enum class PretrainSource { TestOnly, Combined, Off };

/// "test", "combined" or "off".
std::string_view to_string(PretrainSource source);
PretrainSource parse_pretrain_source(std::string_view name);

/// Regression as inpainting: y is predicted as the last component of the
/// sparse reconstruction of (x, mean y) under the extended dictionary.
struct RegressionModel {
  StandardizationStats stats;
  Dictionary extended_dictionary;
  learn::LearnConfig learn_config;
  PretrainSource pretrain_source = PretrainSource::Combined;
  /// Penalty used at prediction time.
  SparsityPenalty lambda;
  learn::TrainTrace pretrain_trace;
  learn::TrainTrace train_trace;

  std::size_t input_dim() const noexcept { return stats.input_dim(); }
  std::size_t num_atoms() const noexcept { return extended_dictionary.num_atoms(); }
};

struct Prediction {
  double y = 0.0;
  SparseCode code;
};

struct PredictionReport {
  std::vector<double> predictions;
  /// y - y_hat
  std::vector<double> errors;
  double error_stddev = 0.0;
  double truth_stddev = 0.0;
  /// error_stddev / truth_stddev
  double q_value = 0.0;
  /// Mean fraction of active atoms over the predicted codes, when known.
  double mean_sparsity = 0.0;
};

/// Q_inf + B exp(-C N_q)
struct ScalingFit {
  double q_infinity = 0.0;
  double b = 0.0;
  double c = 0.0;
  double residual_sum = 0.0;

  double operator()(double n_q) const;
};

struct SweepRow {
  std::size_t n_q = 0;
  double q_value = 0.0;
  double sparsity = 0.0;
  double lambda = 0.0;
  double error_stddev = 0.0;
  double overcompleteness = 0.0;
};

/// Learns an x-only D x n_q dictionary from a seeded random start.
Dictionary pretrain(std::span<const Vector> x_vectors, std::size_t n_q, const learn::LearnConfig& config,
                    learn::TrainTrace* trace = nullptr);

/// Appends a zero row.
Dictionary extend_dictionary(const Dictionary& dictionary);

/// Standardizes with training statistics, pretrains per `source`, extends
/// the dictionary and trains it on the concatenated (x, y) vectors.
RegressionModel fit(std::span<const Sample> train, std::span<const Vector> test_x, std::size_t n_q,
                    const learn::LearnConfig& config, PretrainSource source);

Prediction predict_detailed(const RegressionModel& model, const Vector& x);
double predict(const RegressionModel& model, const Vector& x);
/// predict_detailed over many inputs, sharing one code solver.
std::vector<Prediction> predict_all(const RegressionModel& model, std::span<const Vector> xs);

/// Sample standard deviation (n - 1 denominator).
double sample_stddev(std::span<const double> values);

/// Q from paired predictions and truths; statistics over these samples only.
/// Throws Empty for no samples and ZeroVariance for constant truth.
PredictionReport report_from_predictions(std::span<const double> predictions, std::span<const double> truth);

PredictionReport evaluate(const RegressionModel& model, std::span<const Sample> test);

/// One fit + evaluate per n_q, lambda re-tuned each time when the config has
/// a target sparsity.
std::vector<SweepRow> sweep_nq(std::span<const Sample> train, std::span<const Sample> test,
                               std::span<const std::size_t> nq_list, const learn::LearnConfig& config,
                               PretrainSource source);

/// Least squares over C in [1e-4, 0.5]: 512 log-spaced values with (Q_inf, B)
/// solved linearly at each, then golden-section refinement of C around the
/// best grid point. Throws TooFewPoints for fewer than three distinct N_q.
ScalingFit fit_scaling(std::span<const std::pair<double, double>> points);

}  // namespace qsc::regress

#endif  // QSC_REGRESS_HPP

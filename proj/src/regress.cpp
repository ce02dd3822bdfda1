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

#include "qsc/regress.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qsc/parallel.hpp"
#include "qsc/rng.hpp"

namespace qsc::regress {
namespace {

enum SeedStream : std::uint64_t { kPretrain = 1, kTrain = 2, kPretrainInit = 3, kTrainInit = 4, kLambda = 5 };

learn::LearnConfig reseeded(const learn::LearnConfig& config, SeedStream stream) {
  learn::LearnConfig out = config;
  out.seed = derive_seed(config.seed, stream);
  return out;
}

std::vector<Vector> standardized_inputs(const StandardizationStats& stats, std::span<const Vector> xs) {
  std::vector<Vector> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(standardize_apply(stats, Sample{x, std::nullopt}).x);
  return out;
}

}  // namespace

std::string_view to_string(PretrainSource source) {
  switch (source) {
    case PretrainSource::TestOnly: return "test";
    case PretrainSource::Combined: return "combined";
    case PretrainSource::Off: return "off";
  }
  return "combined";
}

PretrainSource parse_pretrain_source(std::string_view name) {
  if (name == "test" || name == "test-only") return PretrainSource::TestOnly;
  if (name == "combined") return PretrainSource::Combined;
  if (name == "off") return PretrainSource::Off;
  throw Error(ErrorCode::InvalidArgument, "unknown pretrain source '" + std::string(name) + "'");
}

double ScalingFit::operator()(double n_q) const { return q_infinity + b * std::exp(-c * n_q); }

Dictionary pretrain(std::span<const Vector> x_vectors, std::size_t n_q, const learn::LearnConfig& config,
                    learn::TrainTrace* trace) {
  if (x_vectors.empty()) throw Error(ErrorCode::Empty, "no inputs to pretrain on");
  const auto d = static_cast<std::size_t>(x_vectors.front().size());
  const auto initial = learn::random_dictionary(d, n_q, derive_seed(config.seed, kPretrainInit));
  auto [phi, t] = learn::train_dictionary(x_vectors, initial, config);
  if (trace) *trace = std::move(t);
  return phi;
}

Dictionary extend_dictionary(const Dictionary& dictionary) {
  const Matrix& atoms = dictionary.atoms();
  Matrix extended = Matrix::Zero(atoms.rows() + 1, atoms.cols());
  extended.topRows(atoms.rows()) = atoms;
  return Dictionary(std::move(extended));
}

RegressionModel fit(std::span<const Sample> train, std::span<const Vector> test_x, std::size_t n_q,
                    const learn::LearnConfig& config, PretrainSource source) {
  config.validate();
  if (train.empty()) throw Error(ErrorCode::Empty, "no training samples");
  if (n_q < 1) throw Error(ErrorCode::InvalidArgument, "n_q must be >= 1");

  RegressionModel model;
  model.learn_config = config;
  model.pretrain_source = source;
  model.stats = standardize_fit(train);
  const std::size_t d = model.input_dim();

  std::vector<Vector> concatenated;
  std::vector<Vector> train_x;
  concatenated.reserve(train.size());
  train_x.reserve(train.size());
  for (const auto& s : train) {
    const Sample z = standardize_apply(model.stats, s);
    concatenated.push_back(concatenate(z));
    train_x.push_back(z.x);
  }

  Dictionary initial;
  if (source == PretrainSource::Off) {
    initial = learn::random_dictionary(d + 1, n_q, derive_seed(config.seed, kTrainInit));
  } else {
    std::vector<Vector> pretrain_x = standardized_inputs(model.stats, test_x);
    if (source == PretrainSource::Combined) pretrain_x.insert(pretrain_x.end(), train_x.begin(), train_x.end());
    initial = extend_dictionary(pretrain(pretrain_x, n_q, reseeded(config, kPretrain), &model.pretrain_trace));
  }

  auto [phi, trace] = learn::train_dictionary(concatenated, initial, reseeded(config, kTrain));
  model.extended_dictionary = std::move(phi);
  model.train_trace = std::move(trace);

  if (!model.train_trace.lambda.empty()) {
    model.lambda = SparsityPenalty(model.train_trace.lambda.back());
  } else if (config.target_sparsity) {
    model.lambda = learn::auto_tune_lambda(model.extended_dictionary, concatenated, *config.target_sparsity,
                                           config.solver, config.probe_size, derive_seed(config.seed, kLambda));
  } else {
    model.lambda = config.lambda;
  }
  return model;
}

std::vector<Prediction> predict_all(const RegressionModel& model, std::span<const Vector> xs) {
  const std::size_t d = model.input_dim();
  if (model.extended_dictionary.input_dim() != d + 1) {
    throw Error(ErrorCode::DimensionMismatch, "model dictionary height differs from statistics");
  }
  const learn::CodeSolver solver(model.learn_config.solver, model.num_atoms());
  std::vector<Prediction> out(xs.size());
  parallel_for(xs.size(), [&](std::size_t k) {
    if (!xs[k].allFinite()) throw Error(ErrorCode::InvalidArgument, "non-finite input");
    const Sample z = standardize_apply(model.stats, Sample{xs[k], std::nullopt});
    Vector masked(static_cast<Eigen::Index>(d + 1));
    // The standardized training mean of y is zero.
    masked << z.x, 0.0;
    const auto result = solver.solve_for(build_qubo(model.extended_dictionary, masked, model.lambda), masked);
    const Vector reconstruction = model.extended_dictionary.reconstruct(result.best_code);
    out[k].y = standardize_invert(model.stats, reconstruction[static_cast<Eigen::Index>(d)], d);
    out[k].code = result.best_code;
  });
  return out;
}

Prediction predict_detailed(const RegressionModel& model, const Vector& x) {
  return std::move(predict_all(model, std::span<const Vector>(&x, 1)).front());
}

double predict(const RegressionModel& model, const Vector& x) { return predict_detailed(model, x).y; }

double sample_stddev(std::span<const double> values) {
  if (values.size() < 2) throw Error(ErrorCode::TooFewSamples, "standard deviation needs two values");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

PredictionReport report_from_predictions(std::span<const double> predictions, std::span<const double> truth) {
  if (truth.empty()) throw Error(ErrorCode::Empty, "no samples to evaluate");
  if (predictions.size() != truth.size()) throw Error(ErrorCode::DimensionMismatch, "predictions and truth differ in count");
  if (std::all_of(truth.begin(), truth.end(), [&](double v) { return v == truth.front(); })) {
    throw Error(ErrorCode::ZeroVariance, "test targets are constant");
  }
  PredictionReport report;
  report.predictions.assign(predictions.begin(), predictions.end());
  report.errors.resize(truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) report.errors[i] = truth[i] - predictions[i];
  report.error_stddev = sample_stddev(report.errors);
  report.truth_stddev = sample_stddev(truth);
  report.q_value = report.error_stddev / report.truth_stddev;
  return report;
}

PredictionReport evaluate(const RegressionModel& model, std::span<const Sample> test) {
  if (test.empty()) throw Error(ErrorCode::Empty, "no test samples");
  std::vector<Vector> xs;
  std::vector<double> truth;
  xs.reserve(test.size());
  truth.reserve(test.size());
  for (const auto& s : test) {
    if (!s.y) throw Error(ErrorCode::InvalidArgument, "test sample without y");
    xs.push_back(s.x);
    truth.push_back(*s.y);
  }
  const auto predictions = predict_all(model, xs);
  std::vector<double> y_hat;
  std::vector<SparseCode> codes;
  y_hat.reserve(predictions.size());
  codes.reserve(predictions.size());
  for (const auto& p : predictions) {
    y_hat.push_back(p.y);
    codes.push_back(p.code);
  }
  auto report = report_from_predictions(y_hat, truth);
  report.mean_sparsity = learn::sparsity(codes);
  return report;
}

std::vector<SweepRow> sweep_nq(std::span<const Sample> train, std::span<const Sample> test,
                               std::span<const std::size_t> nq_list, const learn::LearnConfig& config,
                               PretrainSource source) {
  if (nq_list.empty()) throw Error(ErrorCode::Empty, "no N_q values to sweep");
  std::vector<Vector> test_x;
  test_x.reserve(test.size());
  for (const auto& s : test) test_x.push_back(s.x);

  std::vector<SweepRow> rows;
  for (auto n_q : nq_list) {
    const auto model = fit(train, test_x, n_q, config, source);
    const auto report = evaluate(model, test);
    SweepRow row;
    row.n_q = n_q;
    row.q_value = report.q_value;
    row.sparsity = report.mean_sparsity;
    row.lambda = model.lambda.value();
    row.error_stddev = report.error_stddev;
    row.overcompleteness = static_cast<double>(n_q) / static_cast<double>(model.input_dim());
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qsc::regress

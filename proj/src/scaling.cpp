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

#include <algorithm>
#include <cmath>
#include <set>

#include "qsc/regress.hpp"

namespace qsc::regress {
namespace {

constexpr double kMinDecay = 1e-4;
constexpr double kMaxDecay = 0.5;
constexpr int kGridSize = 512;

// Linear least squares for (Q_inf, B) at fixed C.
ScalingFit solve_linear(std::span<const std::pair<double, double>> points, double c) {
  const double n = static_cast<double>(points.size());
  double mean_f = 0.0;
  double mean_q = 0.0;
  for (const auto& [n_q, q] : points) {
    mean_f += std::exp(-c * n_q);
    mean_q += q;
  }
  mean_f /= n;
  mean_q /= n;
  double sff = 0.0;
  double sfq = 0.0;
  for (const auto& [n_q, q] : points) {
    const double f = std::exp(-c * n_q) - mean_f;
    sff += f * f;
    sfq += f * (q - mean_q);
  }
  ScalingFit fit;
  fit.c = c;
  fit.b = sff > 0.0 ? sfq / sff : 0.0;
  fit.q_infinity = mean_q - fit.b * mean_f;
  for (const auto& [n_q, q] : points) {
    const double r = q - fit(n_q);
    fit.residual_sum += r * r;
  }
  return fit;
}

}  // namespace

ScalingFit fit_scaling(std::span<const std::pair<double, double>> points) {
  std::set<double> distinct;
  for (const auto& [n_q, q] : points) {
    if (!std::isfinite(n_q) || !std::isfinite(q)) throw Error(ErrorCode::InvalidArgument, "non-finite scaling point");
    distinct.insert(n_q);
  }
  if (distinct.size() < 3) throw Error(ErrorCode::TooFewPoints, "scaling fit needs three distinct N_q values");

  const double log_lo = std::log(kMinDecay);
  const double step = (std::log(kMaxDecay) - log_lo) / (kGridSize - 1);
  int best_index = 0;
  ScalingFit best = solve_linear(points, kMinDecay);
  for (int i = 1; i < kGridSize; ++i) {
    const auto candidate = solve_linear(points, std::exp(log_lo + step * i));
    if (candidate.residual_sum < best.residual_sum) {
      best = candidate;
      best_index = i;
    }
  }

  // Golden-section search in log C over the neighbouring grid cells.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = log_lo + step * std::max(best_index - 1, 0);
  double b = log_lo + step * std::min(best_index + 1, kGridSize - 1);
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  auto f1 = solve_linear(points, std::exp(x1));
  auto f2 = solve_linear(points, std::exp(x2));
  for (int iter = 0; iter < 200 && b - a > 1e-14; ++iter) {
    if (f1.residual_sum <= f2.residual_sum) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = solve_linear(points, std::exp(x1));
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = solve_linear(points, std::exp(x2));
    }
  }
  for (const auto* f : {&f1, &f2}) {
    if (f->residual_sum < best.residual_sum) best = *f;
  }
  return best;
}

}  // namespace qsc::regress

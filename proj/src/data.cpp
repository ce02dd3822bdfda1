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

#include "qsc/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "qsc/io.hpp"
#include "qsc/rng.hpp"

namespace qsc::data {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

void SyntheticConfig::validate() const {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "d must be >= 1");
  if (latent_dim < 1 || latent_dim > d) throw Error(ErrorCode::InvalidArgument, "need 1 <= latent_dim <= d");
  if (!(noise_sigma > 0.0) || !(target_noise_sigma > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "noise sigmas must be > 0");
  }
}

std::vector<Sample> gen_synthetic(const SyntheticConfig& config) {
  config.validate();
  const auto d = static_cast<Eigen::Index>(config.d);
  const auto k = static_cast<Eigen::Index>(config.latent_dim);
  std::normal_distribution<double> normal(0.0, 1.0);

  Rng model_rng(derive_seed(config.seed, 0));
  Matrix mixing(d, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) mixing(i, j) = normal(model_rng);
  }
  Vector weights(k);
  for (Eigen::Index j = 0; j < k; ++j) weights[j] = normal(model_rng);

  Rng rng(derive_seed(config.seed, 1));
  std::vector<Sample> samples;
  samples.reserve(config.n_samples);
  Vector z(k);
  for (std::size_t s = 0; s < config.n_samples; ++s) {
    for (Eigen::Index j = 0; j < k; ++j) z[j] = normal(rng);
    Sample sample;
    sample.x = mixing * z;
    for (Eigen::Index i = 0; i < d; ++i) sample.x[i] += config.noise_sigma * normal(rng);
    sample.y = weights.dot(z) + config.target_noise_sigma * normal(rng);
    samples.push_back(std::move(sample));
  }
  return samples;
}

void write_csv(std::ostream& out, std::span<const Sample> samples) {
  const std::size_t d = samples.empty() ? 0 : static_cast<std::size_t>(samples.front().x.size());
  const bool has_y = std::any_of(samples.begin(), samples.end(), [](const Sample& s) { return s.y.has_value(); });
  for (std::size_t i = 0; i < d; ++i) out << (i ? "," : "") << 'x' << (i + 1);
  if (has_y) out << (d ? "," : "") << 'y';
  out << '\n';
  for (const auto& s : samples) {
    if (static_cast<std::size_t>(s.x.size()) != d) throw Error(ErrorCode::DimensionMismatch, "ragged samples");
    for (std::size_t i = 0; i < d; ++i) out << (i ? "," : "") << io::format_double(s.x[static_cast<Eigen::Index>(i)]);
    if (has_y) {
      out << (d ? "," : "");
      if (s.y) out << io::format_double(*s.y);
    }
    out << '\n';
  }
}

void save_csv(const std::filesystem::path& path, std::span<const Sample> samples) {
  std::ostringstream buffer;
  write_csv(buffer, samples);
  io::write_text_file(path, buffer.str());
}

std::vector<Sample> read_csv(std::istream& in, const std::string& source) {
  auto parse_error = [&](std::size_t line_no, const std::string& what) {
    return Error(ErrorCode::ParseError, source + ":" + std::to_string(line_no) + ": " + what);
  };
  std::string line;
  if (!std::getline(in, line)) return {};
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto header = split_fields(line);
  std::size_t d = 0;
  bool has_y = false;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto name = header[i];
    if (name == "y" && i + 1 == header.size()) {
      has_y = true;
    } else if (name == "x" + std::to_string(i + 1)) {
      ++d;
    } else {
      throw parse_error(1, "unexpected header field '" + std::string(name) + "'");
    }
  }

  std::vector<Sample> samples;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::DimensionMismatch, source + ":" + std::to_string(line_no) + ": expected " +
                                                    std::to_string(header.size()) + " fields, got " +
                                                    std::to_string(fields.size()));
    }
    Sample s;
    s.x.resize(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const auto field = fields[i];
      if (has_y && i == d && field.empty()) continue;
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value)) {
        throw parse_error(line_no, "cannot parse '" + std::string(field) + "' as a finite number");
      }
      if (i < d) {
        s.x[static_cast<Eigen::Index>(i)] = value;
      } else {
        s.y = value;
      }
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

std::vector<Sample> load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return read_csv(in, path.string());
}

std::pair<std::vector<Sample>, std::vector<Sample>> split(std::span<const Sample> samples, double train_fraction,
                                                          std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "train fraction must lie in (0, 1)");
  }
  if (samples.empty()) throw Error(ErrorCode::Empty, "nothing to split");
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(seed, 0x73706c74ULL));
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(samples.size())));

  std::pair<std::vector<Sample>, std::vector<Sample>> out;
  out.first.reserve(n_train);
  out.second.reserve(samples.size() - n_train);
  for (std::size_t k = 0; k < order.size(); ++k) {
    (k < n_train ? out.first : out.second).push_back(samples[order[k]]);
  }
  return out;
}

}  // namespace qsc::data

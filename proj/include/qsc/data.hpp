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

#ifndef QSC_DATA_HPP
#define QSC_DATA_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qsc/core.hpp"

namespace qsc::data {

/// Low-rank latent model: x = A z + noise, y = b.z + noise, z ~ N(0, I).
/// The default d = 20 mirrors two complex observables on five timeslices.
struct SyntheticConfig {
  std::size_t n_samples = 10000;
  std::size_t d = 20;
  std::size_t latent_dim = 4;
  double noise_sigma = 0.1;
  double target_noise_sigma = 0.1;
  std::uint64_t seed = 0;

  void validate() const;
};

std::vector<Sample> gen_synthetic(const SyntheticConfig& config);

/// Header `x1,...,xD[,y]`, one row per sample, 17 significant digits. A
/// sample without y leaves the y field empty when the file has a y column.
void save_csv(const std::filesystem::path& path, std::span<const Sample> samples);
void write_csv(std::ostream& out, std::span<const Sample> samples);
std::vector<Sample> load_csv(const std::filesystem::path& path);
/// `source` names the stream in ParseError messages.
std::vector<Sample> read_csv(std::istream& in, const std::string& source);

/// 6976 / 15616: reproduces a 6976 / 8640 split of 15616 samples.
inline constexpr double kDefaultTrainFraction = 6976.0 / 15616.0;

/// Seeded shuffle, then the first floor(fraction * n) samples train.
std::pair<std::vector<Sample>, std::vector<Sample>> split(std::span<const Sample> samples, double train_fraction,
                                                          std::uint64_t seed);

}  // namespace qsc::data

#endif  // QSC_DATA_HPP

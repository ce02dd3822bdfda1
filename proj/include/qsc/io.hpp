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

#ifndef QSC_IO_HPP
#define QSC_IO_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"
#include "qsc/core.hpp"
#include "qsc/learn.hpp"
#include "qsc/regress.hpp"

namespace qsc::io {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);
/// Strict parse of a whole field; ParseError names `context`.
double parse_double(std::string_view text, const std::string& context);

std::string read_text_file(const std::filesystem::path& path);
/// Writes bytes verbatim (LF stays LF). Throws Io on failure.
void write_text_file(const std::filesystem::path& path, const std::string& contents);

/// Row-major, comma separated, no header.
void save_matrix_csv(const std::filesystem::path& path, const Matrix& m);
Matrix load_matrix_csv(const std::filesystem::path& path);

nlohmann::json to_json(const learn::SolverConfig& config);
learn::SolverConfig solver_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const learn::LearnConfig& config);
/// Missing keys keep their defaults; unknown keys are rejected.
learn::LearnConfig learn_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const learn::TrainTrace& trace);

/// Model directory: stats.csv, dictionary.csv and config.json.
void save_model(const std::filesystem::path& dir, const regress::RegressionModel& model);
regress::RegressionModel load_model(const std::filesystem::path& dir);

}  // namespace qsc::io

#endif  // QSC_IO_HPP

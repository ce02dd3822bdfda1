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

#include "qsc/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace qsc::io {
namespace {

using nlohmann::json;

void reject_unknown_keys(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw Error(ErrorCode::ParseError, "unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read_key(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("bad value for '") + key + "': " + e.what());
  }
}

std::vector<std::string_view> split_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 32> buffer{};
  const auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), ptr);
}

double parse_double(std::string_view text, const std::string& context) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw Error(ErrorCode::ParseError, context + ": cannot parse '" + std::string(text) + "' as a finite number");
  }
  return value;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << contents;
  out.close();
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

void save_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
  std::string text;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) text += ',';
      text += format_double(m(r, c));
    }
    text += '\n';
  }
  write_text_file(path, text);
}

Matrix load_matrix_csv(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw Error(ErrorCode::Empty, path.string() + " holds no rows");
  const auto cols = split_line(lines.front()).size();
  Matrix m(static_cast<Eigen::Index>(lines.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < lines.size(); ++r) {
    const auto fields = split_line(lines[r]);
    const std::string where = path.string() + ":" + std::to_string(r + 1);
    if (fields.size() != cols) throw Error(ErrorCode::DimensionMismatch, where + ": ragged row");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = parse_double(fields[c], where);
    }
  }
  return m;
}

json to_json(const learn::SolverConfig& config) {
  return json{{"kind", std::string(learn::to_string(config.kind))},
              {"sweeps", config.schedule.sweeps},
              {"beta_initial", config.schedule.beta_initial},
              {"beta_final", config.schedule.beta_final},
              {"reads", config.schedule.reads},
              {"anneal_seed", config.schedule.seed},
              {"chain_strengths", config.chain_strengths},
              {"chimera_size", config.chimera_size}};
}

learn::SolverConfig solver_config_from_json(const json& j) {
  reject_unknown_keys(j,
                      {"kind", "sweeps", "beta_initial", "beta_final", "reads", "anneal_seed", "chain_strengths",
                       "chimera_size"},
                      "solver config");
  learn::SolverConfig config;
  std::string kind(learn::to_string(config.kind));
  read_key(j, "kind", kind);
  config.kind = learn::parse_solver_kind(kind);
  read_key(j, "sweeps", config.schedule.sweeps);
  read_key(j, "beta_initial", config.schedule.beta_initial);
  read_key(j, "beta_final", config.schedule.beta_final);
  read_key(j, "reads", config.schedule.reads);
  read_key(j, "anneal_seed", config.schedule.seed);
  read_key(j, "chain_strengths", config.chain_strengths);
  read_key(j, "chimera_size", config.chimera_size);
  return config;
}

json to_json(const learn::LearnConfig& config) {
  json j{{"eta_initial", config.eta_initial},
         {"eta_decay_steps", config.eta_decay_steps},
         {"batch_size", config.batch_size},
         {"max_outer_iters", config.max_outer_iters},
         {"converge_tol", config.converge_tol},
         {"lambda", config.lambda.value()},
         {"target_sparsity", nullptr},
         {"probe_size", config.probe_size},
         {"solver", to_json(config.solver)},
         {"seed", config.seed}};
  if (config.target_sparsity) j["target_sparsity"] = *config.target_sparsity;
  return j;
}

learn::LearnConfig learn_config_from_json(const json& j) {
  reject_unknown_keys(j,
                      {"eta_initial", "eta_decay_steps", "batch_size", "max_outer_iters", "converge_tol", "lambda",
                       "target_sparsity", "probe_size", "solver", "seed"},
                      "learn config");
  learn::LearnConfig config;
  read_key(j, "eta_initial", config.eta_initial);
  read_key(j, "eta_decay_steps", config.eta_decay_steps);
  read_key(j, "batch_size", config.batch_size);
  read_key(j, "max_outer_iters", config.max_outer_iters);
  read_key(j, "converge_tol", config.converge_tol);
  double lambda = config.lambda.value();
  read_key(j, "lambda", lambda);
  config.lambda = SparsityPenalty(lambda);
  if (j.contains("target_sparsity") && !j.at("target_sparsity").is_null()) {
    double target = 0.0;
    read_key(j, "target_sparsity", target);
    config.target_sparsity = target;
  }
  read_key(j, "probe_size", config.probe_size);
  if (j.contains("solver")) config.solver = solver_config_from_json(j.at("solver"));
  read_key(j, "seed", config.seed);
  config.validate();
  return config;
}

json to_json(const learn::TrainTrace& trace) {
  return json{{"mean_energy", trace.mean_energy},
              {"mean_sparsity", trace.mean_sparsity},
              {"lambda", trace.lambda},
              {"outer_iterations", trace.outer_iterations}};
}

void save_model(const std::filesystem::path& dir, const regress::RegressionModel& model) {
  std::filesystem::create_directories(dir);
  std::string stats = "mean,stddev\n";
  for (Eigen::Index i = 0; i < model.stats.means.size(); ++i) {
    stats += format_double(model.stats.means[i]) + "," + format_double(model.stats.stddevs[i]) + "\n";
  }
  write_text_file(dir / "stats.csv", stats);
  save_matrix_csv(dir / "dictionary.csv", model.extended_dictionary.atoms());
  const json config{{"input_dim", model.input_dim()},
                    {"n_q", model.num_atoms()},
                    {"lambda", model.lambda.value()},
                    {"pretrain_source", std::string(regress::to_string(model.pretrain_source))},
                    {"learn", to_json(model.learn_config)},
                    {"pretrain_trace", to_json(model.pretrain_trace)},
                    {"train_trace", to_json(model.train_trace)}};
  write_text_file(dir / "config.json", config.dump(2) + "\n");
}

regress::RegressionModel load_model(const std::filesystem::path& dir) {
  regress::RegressionModel model;
  const auto stats_lines = read_lines(dir / "stats.csv");
  if (stats_lines.size() < 3 || stats_lines.front() != "mean,stddev") {
    throw Error(ErrorCode::ParseError, (dir / "stats.csv").string() + ": expected header and at least two rows");
  }
  const auto n = static_cast<Eigen::Index>(stats_lines.size() - 1);
  model.stats.means.resize(n);
  model.stats.stddevs.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::string where = (dir / "stats.csv").string() + ":" + std::to_string(i + 2);
    const auto fields = split_line(stats_lines[static_cast<std::size_t>(i + 1)]);
    if (fields.size() != 2) throw Error(ErrorCode::DimensionMismatch, where + ": expected 2 fields");
    model.stats.means[i] = parse_double(fields[0], where);
    model.stats.stddevs[i] = parse_double(fields[1], where);
    if (!(model.stats.stddevs[i] > 0.0)) throw Error(ErrorCode::ZeroVariance, where + ": stddev must be > 0");
  }

  model.extended_dictionary = Dictionary(load_matrix_csv(dir / "dictionary.csv"));
  if (model.extended_dictionary.input_dim() != static_cast<std::size_t>(n)) {
    throw Error(ErrorCode::DimensionMismatch, "dictionary height differs from stats.csv");
  }

  json config;
  try {
    config = json::parse(read_text_file(dir / "config.json"));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, (dir / "config.json").string() + ": " + e.what());
  }
  if (!config.is_object() || !config.contains("learn") || !config.contains("lambda")) {
    throw Error(ErrorCode::ParseError, (dir / "config.json").string() + ": missing learn or lambda");
  }
  model.learn_config = learn_config_from_json(config.at("learn"));
  double lambda = 0.0;
  read_key(config, "lambda", lambda);
  model.lambda = SparsityPenalty(lambda);
  std::string source(regress::to_string(model.pretrain_source));
  read_key(config, "pretrain_source", source);
  model.pretrain_source = regress::parse_pretrain_source(source);
  return model;
}

}  // namespace qsc::io

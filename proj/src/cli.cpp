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

#include "qsc/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qsc/data.hpp"
#include "qsc/io.hpp"
#include "qsc/parallel.hpp"
#include "qsc/regress.hpp"
#include "qsc/rng.hpp"

#ifndef QSC_VERSION
#define QSC_VERSION "unknown"
#endif

namespace qsc::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Flags shared by fit and sweep.
struct LearnOptions {
  double eta = 0.01;
  std::size_t eta_decay_steps = 0;
  std::size_t batch_size = 50;
  std::size_t epochs = 10;
  double converge_tol = 1e-3;
  double lambda = 0.1;
  double target_sparsity = 0.2;
  std::size_t probe_size = 128;
  std::string solver = "exhaustive";
  std::size_t sweeps = 1000;
  double beta_initial = 0.1;
  double beta_final = 10.0;
  std::size_t reads = 20;
  std::string chain_strengths;
  std::size_t chimera_size = 16;
  std::uint64_t seed = 0;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(LearnOptions, eta, eta_decay_steps, batch_size, epochs, converge_tol,
                                                lambda, target_sparsity, probe_size, solver, sweeps, beta_initial,
                                                beta_final, reads, chain_strengths, chimera_size, seed)

struct GenDataOptions {
  std::size_t n_samples = 10000;
  std::size_t d = 20;
  std::size_t latent_dim = 4;
  double noise_sigma = 0.1;
  double target_noise_sigma = 0.1;
  std::uint64_t seed = 0;
  std::string out;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(GenDataOptions, n_samples, d, latent_dim, noise_sigma,
                                                target_noise_sigma, seed, out)

struct SplitOptions {
  std::string in;
  double train_fraction = data::kDefaultTrainFraction;
  std::uint64_t seed = 0;
  std::string train_out;
  std::string test_out;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SplitOptions, in, train_fraction, seed, train_out, test_out)

struct FitOptions {
  std::string train;
  std::string test;
  std::size_t nq = 20;
  std::string pretrain = "combined";
  LearnOptions learn;
  std::string out;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(FitOptions, train, test, nq, pretrain, learn, out)

struct PredictOptions {
  std::string model;
  std::string in;
  std::string out;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(PredictOptions, model, in, out)

struct EvalOptions {
  std::string predictions;
  std::string truth;
  std::string out;
  std::string histogram;
  std::size_t bins = 40;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(EvalOptions, predictions, truth, out, histogram, bins)

struct SweepOptions {
  std::string train;
  std::string test;
  std::string nq = "20,29,38,47,55,64";
  std::string pretrain = "combined";
  LearnOptions learn;
  std::string out;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SweepOptions, train, test, nq, pretrain, learn, out)

struct FitScalingOptions {
  std::string in;
  std::string column = "q";
  std::string exclude_nq;
  std::string out;
  std::string curve;
  std::size_t curve_points = 101;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(FitScalingOptions, in, column, exclude_nq, out, curve, curve_points)

// Files a command wrote; the manifest goes to `manifest`.
struct RunOutputs {
  fs::path manifest;
  std::vector<fs::path> files;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& text, const char* what) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(text)) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (ec != std::errc() || ptr != item.data() + item.size()) {
      throw Error(ErrorCode::InvalidArgument, std::string("bad entry '") + item + "' in " + what);
    }
    out.push_back(value);
  }
  return out;
}

learn::LearnConfig to_config(const LearnOptions& o) {
  learn::LearnConfig config;
  config.eta_initial = o.eta;
  config.eta_decay_steps = o.eta_decay_steps;
  config.batch_size = o.batch_size;
  config.max_outer_iters = o.epochs;
  config.converge_tol = o.converge_tol;
  config.lambda = SparsityPenalty(o.lambda);
  if (o.target_sparsity > 0.0) config.target_sparsity = o.target_sparsity;
  config.probe_size = o.probe_size;
  config.solver.kind = learn::parse_solver_kind(o.solver);
  config.solver.schedule.sweeps = o.sweeps;
  config.solver.schedule.beta_initial = o.beta_initial;
  config.solver.schedule.beta_final = o.beta_final;
  config.solver.schedule.reads = o.reads;
  config.solver.schedule.seed = derive_seed(o.seed, 0x616e6eULL);
  for (const auto& item : split_list(o.chain_strengths)) {
    config.solver.chain_strengths.push_back(io::parse_double(item, "--chain-strengths"));
  }
  config.solver.chimera_size = o.chimera_size;
  config.seed = o.seed;
  config.validate();
  return config;
}

void bind_learn(CLI::App& cmd, LearnOptions& o) {
  cmd.add_option("--eta", o.eta, "initial SGD step size")->capture_default_str();
  cmd.add_option("--eta-decay-steps", o.eta_decay_steps, "step-size decay constant in batches (0: one epoch)")
      ->capture_default_str();
  cmd.add_option("--batch-size", o.batch_size)->capture_default_str();
  cmd.add_option("--epochs", o.epochs, "maximum inference/SGD alternations")->capture_default_str();
  cmd.add_option("--converge-tol", o.converge_tol)->capture_default_str();
  cmd.add_option("--lambda", o.lambda, "sparsity penalty when --target-sparsity is 0")->capture_default_str();
  cmd.add_option("--target-sparsity", o.target_sparsity, "mean active fraction lambda is tuned to (0: fixed)")
      ->capture_default_str();
  cmd.add_option("--probe-size", o.probe_size, "inputs used per lambda tuning probe")->capture_default_str();
  cmd.add_option("--solver", o.solver)
      ->check(CLI::IsMember({"exhaustive", "sa", "embedded-sa"}))
      ->capture_default_str();
  cmd.add_option("--sweeps", o.sweeps)->capture_default_str();
  cmd.add_option("--beta-initial", o.beta_initial)->capture_default_str();
  cmd.add_option("--beta-final", o.beta_final)->capture_default_str();
  cmd.add_option("--reads", o.reads)->capture_default_str();
  cmd.add_option("--chain-strengths", o.chain_strengths, "comma-separated; empty picks 10 per problem");
  cmd.add_option("--chimera-size", o.chimera_size)->capture_default_str();
  cmd.add_option("--seed", o.seed)->capture_default_str();
}

void slurp_csv_column(const fs::path& path, const std::string& column, std::vector<double>& values) {
  std::istringstream in(io::read_text_file(path));
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::Empty, path.string() + " is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_list(line);
  const auto it = std::find(header.begin(), header.end(), column);
  if (it == header.end()) throw Error(ErrorCode::ParseError, path.string() + ": no column '" + column + "'");
  const auto index = static_cast<std::size_t>(it - header.begin());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream row(line);
    std::string field;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (fields.size() != header.size()) throw Error(ErrorCode::DimensionMismatch, where + ": wrong field count");
    values.push_back(io::parse_double(fields[index], where));
  }
}

RunOutputs run_gen_data(const GenDataOptions& o) {
  data::SyntheticConfig config;
  config.n_samples = o.n_samples;
  config.d = o.d;
  config.latent_dim = o.latent_dim;
  config.noise_sigma = o.noise_sigma;
  config.target_noise_sigma = o.target_noise_sigma;
  config.seed = o.seed;
  data::save_csv(o.out, data::gen_synthetic(config));
  return {fs::path(o.out + ".manifest.json"), {o.out}};
}

RunOutputs run_split(const SplitOptions& o) {
  const auto samples = data::load_csv(o.in);
  const auto [train, test] = data::split(samples, o.train_fraction, o.seed);
  data::save_csv(o.train_out, train);
  data::save_csv(o.test_out, test);
  return {fs::path(o.train_out + ".manifest.json"), {o.train_out, o.test_out}};
}

std::vector<Vector> inputs_of(const std::vector<Sample>& samples) {
  std::vector<Vector> xs;
  xs.reserve(samples.size());
  for (const auto& s : samples) xs.push_back(s.x);
  return xs;
}

RunOutputs run_fit(const FitOptions& o) {
  const auto config = to_config(o.learn);
  const auto source = regress::parse_pretrain_source(o.pretrain);
  const auto train = data::load_csv(o.train);
  const std::vector<Sample> test = o.test.empty() ? std::vector<Sample>{} : data::load_csv(o.test);
  const auto model = regress::fit(train, inputs_of(test), o.nq, config, source);
  const fs::path dir(o.out);
  io::save_model(dir, model);
  return {dir / "manifest.json", {dir / "stats.csv", dir / "dictionary.csv", dir / "config.json"}};
}

RunOutputs run_predict(const PredictOptions& o) {
  const auto model = io::load_model(o.model);
  const auto samples = data::load_csv(o.in);
  const auto predictions = regress::predict_all(model, inputs_of(samples));
  std::string text = "y_hat,active_atoms\n";
  for (const auto& p : predictions) text += io::format_double(p.y) + "," + std::to_string(p.code.count_ones()) + "\n";
  io::write_text_file(o.out, text);
  return {fs::path(o.out + ".manifest.json"), {o.out}};
}

std::string default_sibling(const std::string& primary, const char* suffix) {
  fs::path p(primary);
  p.replace_extension();
  return p.string() + suffix;
}

RunOutputs run_eval(const EvalOptions& o) {
  if (o.bins < 1) throw Error(ErrorCode::InvalidArgument, "--bins must be >= 1");
  std::vector<double> y_hat;
  slurp_csv_column(o.predictions, "y_hat", y_hat);
  const auto samples = data::load_csv(o.truth);
  std::vector<double> truth;
  truth.reserve(samples.size());
  for (const auto& s : samples) {
    if (!s.y) throw Error(ErrorCode::InvalidArgument, o.truth + ": every sample needs y");
    truth.push_back(*s.y);
  }
  const auto report = regress::report_from_predictions(y_hat, truth);

  double truth_mean = 0.0;
  for (double v : truth) truth_mean += v;
  truth_mean /= static_cast<double>(truth.size());
  const std::vector<double> constant(truth.size(), truth_mean);
  const auto baseline = regress::report_from_predictions(constant, truth);

  double mean_error = 0.0;
  for (double e : report.errors) mean_error += e;
  mean_error /= static_cast<double>(report.errors.size());

  const json j{{"n", truth.size()},
               {"q", report.q_value},
               {"error_stddev", report.error_stddev},
               {"truth_stddev", report.truth_stddev},
               {"mean_error", mean_error},
               {"mean_predictor_q", baseline.q_value}};
  io::write_text_file(o.out, j.dump(2) + "\n");

  const auto [lo_it, hi_it] = std::minmax_element(report.errors.begin(), report.errors.end());
  const double lo = *lo_it;
  const double width = *hi_it > lo ? (*hi_it - lo) / static_cast<double>(o.bins) : 1.0;
  std::vector<std::size_t> counts(o.bins, 0);
  for (double e : report.errors) {
    const auto bin = static_cast<std::size_t>((e - lo) / width);
    ++counts[std::min(bin, o.bins - 1)];
  }
  std::string hist = "bin_lo,bin_hi,count\n";
  for (std::size_t b = 0; b < o.bins; ++b) {
    hist += io::format_double(lo + width * static_cast<double>(b)) + "," +
            io::format_double(lo + width * static_cast<double>(b + 1)) + "," + std::to_string(counts[b]) + "\n";
  }
  io::write_text_file(o.histogram, hist);
  return {fs::path(o.out + ".manifest.json"), {o.out, o.histogram}};
}

RunOutputs run_sweep(const SweepOptions& o) {
  const auto config = to_config(o.learn);
  const auto source = regress::parse_pretrain_source(o.pretrain);
  const auto nq_list = parse_size_list(o.nq, "--nq");
  const auto train = data::load_csv(o.train);
  const auto test = data::load_csv(o.test);
  const auto rows = regress::sweep_nq(train, test, nq_list, config, source);
  std::string text = "n_q,q,sparsity,lambda,error_stddev,overcompleteness\n";
  for (const auto& r : rows) {
    text += std::to_string(r.n_q) + "," + io::format_double(r.q_value) + "," + io::format_double(r.sparsity) + "," +
            io::format_double(r.lambda) + "," + io::format_double(r.error_stddev) + "," +
            io::format_double(r.overcompleteness) + "\n";
  }
  io::write_text_file(o.out, text);
  return {fs::path(o.out + ".manifest.json"), {o.out}};
}

RunOutputs run_fit_scaling(const FitScalingOptions& o) {
  if (o.curve_points < 2) throw Error(ErrorCode::InvalidArgument, "--curve-points must be >= 2");
  std::vector<double> n_q;
  std::vector<double> q;
  slurp_csv_column(o.in, "n_q", n_q);
  slurp_csv_column(o.in, o.column, q);
  const auto excluded = parse_size_list(o.exclude_nq, "--exclude-nq");
  std::vector<std::pair<double, double>> points;
  for (std::size_t i = 0; i < n_q.size(); ++i) {
    const bool skip = std::any_of(excluded.begin(), excluded.end(),
                                  [&](std::size_t e) { return static_cast<double>(e) == n_q[i]; });
    if (!skip) points.emplace_back(n_q[i], q[i]);
  }
  const auto fit = regress::fit_scaling(points);
  const json j{{"q_infinity", fit.q_infinity},
               {"b", fit.b},
               {"c", fit.c},
               {"residual_sum", fit.residual_sum},
               {"column", o.column},
               {"points", points.size()}};
  io::write_text_file(o.out, j.dump(2) + "\n");

  double lo = points.front().first;
  double hi = lo;
  for (const auto& p : points) {
    lo = std::min(lo, p.first);
    hi = std::max(hi, p.first);
  }
  std::string curve = "n_q,q_fit\n";
  for (std::size_t k = 0; k < o.curve_points; ++k) {
    const double x = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(o.curve_points - 1);
    curve += io::format_double(x) + "," + io::format_double(fit(x)) + "\n";
  }
  io::write_text_file(o.curve, curve);
  return {fs::path(o.out + ".manifest.json"), {o.out, o.curve}};
}

// Options whose values name files; stored absolute so a manifest replays
// from any working directory.
const std::vector<std::string> kPathKeys = {"out", "in", "train", "test", "model", "predictions",
                                            "truth", "histogram", "curve", "train_out", "test_out"};

void absolutize_paths(json& options) {
  for (const auto& key : kPathKeys) {
    if (options.contains(key) && options[key].is_string() && !options[key].get<std::string>().empty()) {
      options[key] = fs::absolute(options[key].get<std::string>()).lexically_normal().string();
    }
  }
}

template <typename Options>
RunOutputs dispatch_typed(const json& options, RunOutputs (*fn)(const Options&)) {
  return fn(options.get<Options>());
}

RunOutputs execute(const std::string& command, const json& options) {
  if (command == "gen-data") return dispatch_typed<GenDataOptions>(options, run_gen_data);
  if (command == "split") return dispatch_typed<SplitOptions>(options, run_split);
  if (command == "fit") return dispatch_typed<FitOptions>(options, run_fit);
  if (command == "predict") return dispatch_typed<PredictOptions>(options, run_predict);
  if (command == "eval") return dispatch_typed<EvalOptions>(options, run_eval);
  if (command == "sweep") return dispatch_typed<SweepOptions>(options, run_sweep);
  if (command == "fit-scaling") return dispatch_typed<FitScalingOptions>(options, run_fit_scaling);
  throw Error(ErrorCode::InvalidArgument, "unknown command '" + command + "'");
}

std::string digest_hex(const fs::path& path) {
  const auto bytes = io::read_text_file(path);
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(fnv1a(std::span(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size()))));
  return buffer;
}

void collect_seeds(const json& j, json& seeds, const std::string& prefix) {
  if (!j.is_object()) return;
  for (const auto& [key, value] : j.items()) {
    if (key == "seed") seeds[prefix + key] = value;
    collect_seeds(value, seeds, prefix + key + ".");
  }
}

json make_manifest(const std::string& command, const std::vector<std::string>& argv, const json& options,
                   const RunOutputs& outputs, double seconds) {
  json files = json::array();
  for (const auto& f : outputs.files) files.push_back({{"path", f.string()}, {"fnv1a64", digest_hex(f)}});
  json seeds = json::object();
  collect_seeds(options, seeds, "");
  json inputs = json::object();
  for (const auto& key : kPathKeys) {
    if (key == "out" || key == "histogram" || key == "curve" || key.ends_with("_out")) continue;
    if (options.contains(key) && !options[key].get<std::string>().empty()) inputs[key] = options[key];
  }
  return json{{"command", command},
              {"argv", argv},
              {"options", options},
              {"seeds", seeds},
              {"inputs", inputs},
              {"outputs", files},
              {"duration_seconds", seconds},
              {"threads", thread_count()},
              {"version", QSC_VERSION}};
}

int replay(const std::string& manifest_path, bool verify, std::ostream& out) {
  json manifest;
  try {
    manifest = json::parse(io::read_text_file(manifest_path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, manifest_path + ": " + e.what());
  }
  if (!manifest.contains("command") || !manifest.contains("options")) {
    throw Error(ErrorCode::ParseError, manifest_path + ": not a run manifest");
  }
  const auto command = manifest.at("command").get<std::string>();
  execute(command, manifest.at("options"));
  if (!verify) {
    out << "replayed " << command << "\n";
    return kOk;
  }
  std::size_t checked = 0;
  for (const auto& entry : manifest.value("outputs", json::array())) {
    const auto path = entry.at("path").get<std::string>();
    if (digest_hex(path) != entry.at("fnv1a64").get<std::string>()) {
      throw Error(ErrorCode::ReplayMismatch, path + " differs from the recorded digest");
    }
    ++checked;
  }
  out << "replayed " << command << ": " << checked << " output(s) reproduced byte-for-byte\n";
  return kOk;
}

std::string json_value_as_arg(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string joined;
    for (const auto& item : v) joined += (joined.empty() ? "" : ",") + json_value_as_arg(item);
    return joined;
  }
  return v.dump();
}

// Turns --config FILE into flags placed right after the subcommand name, so
// flags given on the command line (parsed later, last one wins) override it.
std::vector<std::string> expand_config(const std::vector<std::string>& args, const std::vector<std::string>& commands) {
  std::vector<std::string> rest;
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw CLI::ArgumentMismatch("--config needs a file");
      config_path = args[++i];
    } else if (args[i].starts_with("--config=")) {
      config_path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (config_path.empty()) return rest;

  json config;
  try {
    config = json::parse(io::read_text_file(config_path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, config_path + ": " + e.what());
  }
  if (!config.is_object()) throw Error(ErrorCode::ParseError, config_path + ": expected a JSON object");
  std::vector<std::string> flags;
  for (const auto& [key, value] : config.items()) {
    if (value.is_null()) continue;
    flags.push_back("--" + key + "=" + json_value_as_arg(value));
  }
  const auto sub = std::find_if(rest.begin(), rest.end(), [&](const std::string& a) {
    return std::find(commands.begin(), commands.end(), a) != commands.end();
  });
  if (sub == rest.end()) return rest;
  rest.insert(sub + 1, flags.begin(), flags.end());
  return rest;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Regression by binary sparse coding with annealing-based code inference", "qsc"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(QSC_VERSION));

  std::size_t threads = 0;
  std::string config_unused;
  app.add_option("--threads", threads, "worker threads (0: $QSC_THREADS or all cores)");
  app.add_option("--config", config_unused, "JSON object of flag values; command-line flags win");

  GenDataOptions gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "write a synthetic latent-factor dataset");
  gen_cmd->add_option("--n-samples", gen.n_samples)->capture_default_str();
  gen_cmd->add_option("--d", gen.d, "input dimension")->capture_default_str();
  gen_cmd->add_option("--latent-dim", gen.latent_dim)->capture_default_str();
  gen_cmd->add_option("--noise-sigma", gen.noise_sigma)->capture_default_str();
  gen_cmd->add_option("--target-noise-sigma", gen.target_noise_sigma)->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed)->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "CSV to write")->required();

  SplitOptions spl;
  auto* split_cmd = app.add_subcommand("split", "shuffle a CSV into train and test files");
  split_cmd->add_option("--in", spl.in)->required();
  split_cmd->add_option("--train-fraction", spl.train_fraction)->capture_default_str();
  split_cmd->add_option("--seed", spl.seed)->capture_default_str();
  split_cmd->add_option("--train-out", spl.train_out)->required();
  split_cmd->add_option("--test-out", spl.test_out)->required();

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "learn a regression model directory");
  fit_cmd->add_option("--train", fit.train, "training CSV with y")->required();
  fit_cmd->add_option("--test", fit.test, "test CSV whose inputs join pre-training");
  fit_cmd->add_option("--nq", fit.nq, "number of dictionary atoms")->capture_default_str();
  fit_cmd->add_option("--pretrain", fit.pretrain)
      ->check(CLI::IsMember({"test", "combined", "off"}))
      ->capture_default_str();
  bind_learn(*fit_cmd, fit.learn);
  fit_cmd->add_option("--out", fit.out, "model directory")->required();

  PredictOptions pred;
  auto* predict_cmd = app.add_subcommand("predict", "predict y for every row of a CSV");
  predict_cmd->add_option("--model", pred.model)->required();
  predict_cmd->add_option("--in", pred.in)->required();
  predict_cmd->add_option("--out", pred.out, "predictions CSV")->required();

  EvalOptions ev;
  auto* eval_cmd = app.add_subcommand("eval", "score predictions against the truth");
  eval_cmd->add_option("--predictions", ev.predictions)->required();
  eval_cmd->add_option("--truth", ev.truth, "CSV with y")->required();
  eval_cmd->add_option("--out", ev.out, "report JSON")->required();
  eval_cmd->add_option("--histogram", ev.histogram, "error histogram CSV (default: <out>.histogram.csv)");
  eval_cmd->add_option("--bins", ev.bins)->capture_default_str();

  SweepOptions sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "fit and evaluate over a list of atom counts");
  sweep_cmd->add_option("--train", sw.train)->required();
  sweep_cmd->add_option("--test", sw.test)->required();
  sweep_cmd->add_option("--nq", sw.nq, "comma-separated atom counts")->capture_default_str();
  sweep_cmd->add_option("--pretrain", sw.pretrain)
      ->check(CLI::IsMember({"test", "combined", "off"}))
      ->capture_default_str();
  bind_learn(*sweep_cmd, sw.learn);
  sweep_cmd->add_option("--out", sw.out, "table CSV")->required();

  FitScalingOptions fs_opts;
  auto* scaling_cmd = app.add_subcommand("fit-scaling", "fit Q_inf + B exp(-C N_q) to a sweep table");
  scaling_cmd->add_option("--in", fs_opts.in, "CSV with an n_q column")->required();
  scaling_cmd->add_option("--column", fs_opts.column, "column to fit")->capture_default_str();
  scaling_cmd->add_option("--exclude-nq", fs_opts.exclude_nq, "comma-separated N_q values to leave out");
  scaling_cmd->add_option("--out", fs_opts.out, "fit JSON")->required();
  scaling_cmd->add_option("--curve", fs_opts.curve, "fitted curve CSV (default: <out>.curve.csv)");
  scaling_cmd->add_option("--curve-points", fs_opts.curve_points)->capture_default_str();

  std::string manifest_path;
  bool no_verify = false;
  auto* replay_cmd = app.add_subcommand("replay", "re-run a command from its manifest and compare outputs");
  replay_cmd->add_option("manifest", manifest_path)->required();
  replay_cmd->add_flag("--no-verify", no_verify, "skip the digest comparison");

  const std::vector<std::string> commands = {"gen-data", "split", "fit",  "predict", "eval",
                                             "sweep",    "fit-scaling", "replay"};
  try {
    auto expanded = expand_config(args, commands);
    std::reverse(expanded.begin(), expanded.end());
    app.parse(expanded);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return category_of(e.code()) == ErrorCategory::Usage ? kUsage : kDataError;
  }

  try {
    if (threads > 0) set_thread_count(threads);
    if (replay_cmd->parsed()) return replay(manifest_path, !no_verify, out);

    std::string command;
    json options;
    if (gen_cmd->parsed()) {
      command = "gen-data";
      options = gen;
    } else if (split_cmd->parsed()) {
      command = "split";
      options = spl;
    } else if (fit_cmd->parsed()) {
      command = "fit";
      options = fit;
    } else if (predict_cmd->parsed()) {
      command = "predict";
      options = pred;
    } else if (eval_cmd->parsed()) {
      command = "eval";
      if (ev.histogram.empty()) ev.histogram = default_sibling(ev.out, ".histogram.csv");
      options = ev;
    } else if (sweep_cmd->parsed()) {
      command = "sweep";
      options = sw;
    } else {
      command = "fit-scaling";
      if (fs_opts.curve.empty()) fs_opts.curve = default_sibling(fs_opts.out, ".curve.csv");
      options = fs_opts;
    }
    absolutize_paths(options);

    const auto start = std::chrono::steady_clock::now();
    const auto outputs = execute(command, options);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto manifest = make_manifest(command, args, options, outputs, seconds);
    io::write_text_file(outputs.manifest, manifest.dump(2) + "\n");
    out << command << ": wrote";
    for (const auto& f : outputs.files) out << " " << f.string();
    out << "\n";
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (category_of(e.code())) {
      case ErrorCategory::Usage: return kUsage;
      case ErrorCategory::Data: return kDataError;
      case ErrorCategory::Numerical: return kNumericalError;
    }
    return kDataError;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
}

}  // namespace qsc::cli

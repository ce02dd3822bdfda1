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

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qsc/cli.hpp"
#include "qsc/data.hpp"
#include "qsc/io.hpp"

namespace qsc {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qsc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string p(const std::string& name) const { return (dir_ / name).string(); }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return cli::run(args, out_, err_);
  }

  // A small dataset and a quick learner keep each command well under a second.
  void make_data() {
    ASSERT_EQ(run({"gen-data", "--n-samples", "160", "--d", "4", "--latent-dim", "2", "--seed", "5", "--out",
                   p("all.csv")}),
              0)
        << err_.str();
    ASSERT_EQ(run({"split", "--in", p("all.csv"), "--train-fraction", "0.5", "--seed", "1", "--train-out",
                   p("train.csv"), "--test-out", p("test.csv")}),
              0)
        << err_.str();
  }

  std::vector<std::string> quick_learn() const {
    return {"--epochs", "2", "--probe-size", "32", "--batch-size", "20", "--eta", "0.05"};
  }

  std::vector<std::string> fit_args(const std::string& out) const {
    std::vector<std::string> a = {"fit", "--train", p("train.csv"), "--test", p("test.csv"), "--nq", "6", "--out", out};
    for (const auto& s : quick_learn()) a.push_back(s);
    return a;
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, GenDataAndSplit) {
  make_data();
  EXPECT_EQ(data::load_csv(p("all.csv")).size(), 160u);
  EXPECT_EQ(data::load_csv(p("train.csv")).size(), 80u);
  EXPECT_EQ(data::load_csv(p("test.csv")).size(), 80u);
  const auto manifest = json::parse(io::read_text_file(p("all.csv") + ".manifest.json"));
  EXPECT_EQ(manifest.at("command"), "gen-data");
  EXPECT_EQ(manifest.at("options").at("seed"), 5);
  EXPECT_EQ(manifest.at("outputs").size(), 1u);
  EXPECT_EQ(manifest.at("outputs")[0].at("fnv1a64").get<std::string>().size(), 16u);
}

TEST_F(CliTest, FitPredictEval) {
  make_data();
  ASSERT_EQ(run(fit_args(p("model"))), 0) << err_.str();
  EXPECT_TRUE(fs::exists(p("model/dictionary.csv")));
  EXPECT_TRUE(fs::exists(p("model/manifest.json")));
  const auto model = io::load_model(p("model"));
  EXPECT_EQ(model.num_atoms(), 6u);
  EXPECT_EQ(model.input_dim(), 4u);

  ASSERT_EQ(run({"predict", "--model", p("model"), "--in", p("test.csv"), "--out", p("pred.csv")}), 0) << err_.str();
  const auto pred = io::read_text_file(p("pred.csv"));
  EXPECT_EQ(pred.rfind("y_hat,active_atoms\n", 0), 0u);
  EXPECT_EQ(std::count(pred.begin(), pred.end(), '\n'), 81);

  ASSERT_EQ(run({"eval", "--predictions", p("pred.csv"), "--truth", p("test.csv"), "--out", p("report.json"),
                 "--bins", "8"}),
            0)
      << err_.str();
  const auto report = json::parse(io::read_text_file(p("report.json")));
  EXPECT_EQ(report.at("n"), 80);
  EXPECT_GT(report.at("q").get<double>(), 0.0);
  EXPECT_DOUBLE_EQ(report.at("mean_predictor_q").get<double>(), 1.0);
  const auto hist = io::read_text_file(p("report.histogram.csv"));
  EXPECT_EQ(std::count(hist.begin(), hist.end(), '\n'), 9);
}

TEST_F(CliTest, SweepWritesOneRowPerAtomCount) {
  make_data();
  std::vector<std::string> a = {"sweep", "--train", p("train.csv"), "--test", p("test.csv"), "--nq", "4,6",
                                "--out", p("sweep.csv")};
  for (const auto& s : quick_learn()) a.push_back(s);
  ASSERT_EQ(run(a), 0) << err_.str();
  const auto text = io::read_text_file(p("sweep.csv"));
  EXPECT_EQ(text.rfind("n_q,q,sparsity,lambda,error_stddev,overcompleteness\n", 0), 0u);
  EXPECT_NE(text.find("\n4,"), std::string::npos);
  EXPECT_NE(text.find("\n6,"), std::string::npos);
}

TEST_F(CliTest, FitScalingOnPublishedPairs) {
  io::write_text_file(p("table.csv"),
                      "n_q,error_stddev\n20,0.41\n29,0.375\n38,0.319\n47,0.29\n55,0.273\n64,0.254\n");
  ASSERT_EQ(run({"fit-scaling", "--in", p("table.csv"), "--column", "error_stddev", "--out", p("fit.json")}), 0)
      << err_.str();
  const double all = json::parse(io::read_text_file(p("fit.json"))).at("q_infinity");
  EXPECT_GE(all, 0.15);
  EXPECT_LE(all, 0.21);
  const auto curve = io::read_text_file(p("fit.curve.csv"));
  EXPECT_EQ(std::count(curve.begin(), curve.end(), '\n'), 102);

  ASSERT_EQ(run({"fit-scaling", "--in", p("table.csv"), "--column", "error_stddev", "--exclude-nq", "20", "--out",
                 p("fit2.json")}),
            0)
      << err_.str();
  const double tail = json::parse(io::read_text_file(p("fit2.json"))).at("q_infinity");
  EXPECT_GE(tail, 0.20);
  EXPECT_LE(tail, 0.26);

  EXPECT_EQ(run({"fit-scaling", "--in", p("table.csv"), "--column", "error_stddev", "--exclude-nq", "20,29,38,47",
                 "--out", p("fit3.json")}),
            3);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run({}), 1);
  EXPECT_EQ(run({"frobnicate"}), 1);
  EXPECT_EQ(run({"gen-data"}), 1);
  EXPECT_EQ(run({"gen-data", "--out", p("x.csv"), "--n-samples", "ten"}), 1);
  EXPECT_EQ(run({"gen-data", "--out", p("x.csv"), "--noise-sigma", "-1"}), 1);
  EXPECT_EQ(run({"split", "--in", p("missing.csv"), "--train-out", p("a.csv"), "--test-out", p("b.csv")}), 2);
  io::write_text_file(p("bad.csv"), "x1,y\n1,2\n3\n");
  EXPECT_EQ(run({"split", "--in", p("bad.csv"), "--train-out", p("a.csv"), "--test-out", p("b.csv")}), 2);
  EXPECT_NE(err_.str().find("bad.csv:3"), std::string::npos);
  EXPECT_EQ(run({"--version"}), 0);
  EXPECT_NE(out_.str().find(QSC_VERSION), std::string::npos);
}

TEST_F(CliTest, ConstantTargetIsADataError) {
  io::write_text_file(p("flat.csv"), "x1,x2,y\n1,2,3\n2,1,3\n0,4,3\n5,2,3\n");
  std::vector<std::string> a = {"fit", "--train", p("flat.csv"), "--nq", "3", "--out", p("m")};
  for (const auto& s : quick_learn()) a.push_back(s);
  EXPECT_EQ(run(a), 2);
  EXPECT_NE(err_.str().find("constant"), std::string::npos);
}

TEST_F(CliTest, ConfigFileFillsFlagsAndCommandLineWins) {
  io::write_text_file(p("cfg.json"), R"({"n-samples": 7, "d": 3, "latent-dim": 1, "seed": 9})");
  ASSERT_EQ(run({"gen-data", "--config", p("cfg.json"), "--out", p("a.csv")}), 0) << err_.str();
  auto rows = data::load_csv(p("a.csv"));
  EXPECT_EQ(rows.size(), 7u);
  EXPECT_EQ(rows.front().x.size(), 3);

  ASSERT_EQ(run({"--config", p("cfg.json"), "gen-data", "--n-samples", "11", "--out", p("b.csv")}), 0) << err_.str();
  EXPECT_EQ(data::load_csv(p("b.csv")).size(), 11u);

  io::write_text_file(p("bad.json"), R"({"no-such-flag": 1})");
  EXPECT_EQ(run({"gen-data", "--config", p("bad.json"), "--out", p("c.csv")}), 1);
  io::write_text_file(p("broken.json"), "{");
  EXPECT_EQ(run({"gen-data", "--config", p("broken.json"), "--out", p("c.csv")}), 2);
}

TEST_F(CliTest, ReplayReproducesOutputsByteForByte) {
  make_data();
  ASSERT_EQ(run(fit_args(p("model"))), 0) << err_.str();
  ASSERT_EQ(run({"predict", "--model", p("model"), "--in", p("test.csv"), "--out", p("pred.csv")}), 0);
  const auto dictionary = io::read_text_file(p("model/dictionary.csv"));
  const auto predictions = io::read_text_file(p("pred.csv"));

  fs::remove(p("model/dictionary.csv"));
  ASSERT_EQ(run({"replay", p("model/manifest.json")}), 0) << err_.str();
  EXPECT_EQ(io::read_text_file(p("model/dictionary.csv")), dictionary);
  ASSERT_EQ(run({"--threads", "2", "replay", p("pred.csv.manifest.json")}), 0) << err_.str();
  EXPECT_EQ(io::read_text_file(p("pred.csv")), predictions);

  auto manifest = json::parse(io::read_text_file(p("pred.csv.manifest.json")));
  manifest["outputs"][0]["fnv1a64"] = "0000000000000000";
  io::write_text_file(p("tampered.json"), manifest.dump());
  EXPECT_EQ(run({"replay", p("tampered.json")}), 3);
  EXPECT_EQ(run({"replay", "--no-verify", p("tampered.json")}), 0);
  io::write_text_file(p("junk.json"), "[]");
  EXPECT_EQ(run({"replay", p("junk.json")}), 2);
}

TEST_F(CliTest, ManifestRecordsSeedsAndRelativePathsBecomeAbsolute) {
  const auto cwd = fs::current_path();
  fs::current_path(dir_);
  const int rc = run({"gen-data", "--n-samples", "5", "--seed", "77", "--out", "rel.csv"});
  fs::current_path(cwd);
  ASSERT_EQ(rc, 0) << err_.str();
  const auto manifest = json::parse(io::read_text_file(p("rel.csv.manifest.json")));
  EXPECT_EQ(fs::path(manifest.at("options").at("out").get<std::string>()), dir_ / "rel.csv");
  EXPECT_EQ(manifest.at("seeds"), json({{"seed", 77}}));
  EXPECT_EQ(manifest.at("version"), QSC_VERSION);
}

}  // namespace
}  // namespace qsc

// Copyright 2026 The spinshield Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "spinshield/cli.hpp"
#include "spinshield/csv.hpp"
#include "spinshield/error.hpp"
#include "spinshield/time_series.hpp"

namespace spinshield::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("spinshield_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "spinshield");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return run(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  std::string out_dir(const std::string& name) const { return (dir_ / name).string(); }

  static std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, EnumerateFourBuffers) {
  const std::string out = out_dir("enum");
  ASSERT_EQ(invoke({"enumerate", "--n", "4", "--planar", "--output-dir", out}), kExitOk) << err_.str();
  std::ifstream f(fs::path(out) / "graphs.csv");
  const CsvTable t = CsvTable::read(f);
  EXPECT_EQ(t.rows.size(), 64u);
  EXPECT_EQ(t.header, (std::vector<std::string>{"index", "k", "canonical_code", "edges"}));
  const std::string summary = slurp(fs::path(out) / "summary.json");
  EXPECT_NE(summary.find("\"geometry_count\": \"64\""), std::string::npos) << summary;

  ASSERT_EQ(invoke({"enumerate", "--n", "6", "--output-dir", out}), kExitOk);
  EXPECT_NE(slurp(fs::path(out) / "summary.json").find("\"shortfall\": \"576\""), std::string::npos);
  ASSERT_EQ(invoke({"enumerate", "--n", "5", "--up-to-isomorphism", "--output-dir", out}), kExitOk);
  std::ifstream g(fs::path(out) / "graphs.csv");
  EXPECT_EQ(CsvTable::read(g).rows.size(), 33u);
}

TEST_F(CliTest, ParseErrorsWriteNothing) {
  const std::string out = out_dir("bad");
  EXPECT_EQ(invoke({"simulate", "--bogus", "--output-dir", out}), kExitParse);
  EXPECT_EQ(invoke({"teleport", "--output-dir", out}), kExitParse);
  EXPECT_EQ(invoke({"simulate", "--geometry", "N=3; edges=(2,", "--n", "3", "--output-dir", out}), kExitParse);
  const std::string cfg = (dir_ / "broken.yaml").string();
  std::ofstream(cfg) << "cluster:\n  n_buffer: [1, 2\n";
  EXPECT_EQ(invoke({"simulate", "--config", cfg, "--output-dir", out}), kExitParse);
  std::ofstream(cfg) << "cluster:\n  n_bufer: 3\n";
  EXPECT_EQ(invoke({"simulate", "--config", cfg, "--output-dir", out}), kExitParse);
  EXPECT_NE(err_.str().find("\"kind\":\"parse\""), std::string::npos) << err_.str();
  EXPECT_FALSE(fs::exists(out));
}

TEST_F(CliTest, ValidationErrors) {
  const std::string out = out_dir("invalid");
  EXPECT_EQ(invoke({"simulate", "--n", "4", "--gamma", "-1", "--output-dir", out}), kExitValidation);
  EXPECT_EQ(invoke({"simulate", "--n", "7", "--output-dir", out}), kExitValidation);
  EXPECT_EQ(invoke({"simulate", "--n", "4", "--dt", "0.3", "--output-dir", out}), kExitValidation);
  EXPECT_FALSE(fs::exists(out));
}

TEST_F(CliTest, DryRunReportsSteps) {
  const std::string out = out_dir("dry");
  ASSERT_EQ(invoke({"simulate", "--n", "4", "--geometry", "maximal", "--t-max", "1000", "--dry-run", "--output-dir",
                    out}),
            kExitOk);
  EXPECT_NE(out_.str().find("estimated steps 1000"), std::string::npos) << out_.str();
  ASSERT_EQ(invoke({"reproduce-table", "I", "--dry-run"}), kExitOk);
  EXPECT_NE(out_.str().find("dry-run: reproduce-table"), std::string::npos);
  EXPECT_FALSE(fs::exists(out));
}

TEST_F(CliTest, SimulateOutputRoundTripsAndIsDeterministic) {
  const std::string a = out_dir("a");
  const std::string b = out_dir("b");
  for (const auto& dir : {a, b}) {
    ASSERT_EQ(invoke({"simulate", "--n", "3", "--geometry", "N=3; edges=(2,3),(3,4)", "--t-max", "500",
                      "--observables", "coh_l1,purity@2-3", "--output-dir", dir}),
              kExitOk)
        << err_.str();
  }
  const std::string text = slurp(fs::path(a) / "timeseries.csv");
  EXPECT_EQ(text, slurp(fs::path(b) / "timeseries.csv"));
  EXPECT_EQ(text.substr(0, text.find('\n')), "t,coh_l1,purity@2-3");
  std::istringstream in(text);
  std::ostringstream again;
  TimeSeries::read_csv(in).write_csv(again);
  EXPECT_EQ(again.str(), text);
  for (const auto& entry : fs::directory_iterator(a)) {
    EXPECT_EQ(entry.path().string().find(".tmp."), std::string::npos);
  }
}

TEST_F(CliTest, EnvironmentSetsOutputDirectory) {
  const std::string out = out_dir("from_env");
  ::setenv("SPINSHIELD_OUTPUT_DIR", out.c_str(), 1);
  const int code = invoke({"enumerate", "--n", "3"});
  ::unsetenv("SPINSHIELD_OUTPUT_DIR");
  ASSERT_EQ(code, kExitOk) << err_.str();
  EXPECT_TRUE(fs::exists(fs::path(out) / "graphs.csv"));
}

TEST_F(CliTest, ConfigFilesAndPrecedence) {
  const std::string yaml = (dir_ / "run.yaml").string();
  std::ofstream(yaml) << "command: protection-time\n"
                         "cluster:\n  n_buffer: 2\n  geometry: maximal\n  g: 0.003\n"
                         "noise:\n  gamma: 0.0007\n"
                         "integrator:\n  t_max: 2000\n"
                         "experiment:\n  metric: coh_l1\n  threshold: 0.5\n";
  const ParsedArgs p = parse_arguments(3, std::array<const char*, 3>{"spinshield", "--config", yaml.c_str()}.data());
  EXPECT_EQ(p.config.command, Command::protection_time);
  EXPECT_EQ(p.config.spec.n_buffer, 2);
  EXPECT_EQ(p.config.spec.g, 0.003);
  EXPECT_EQ(p.config.spec.noise.gamma, 0.0007);
  EXPECT_EQ(p.config.threshold, 0.5);

  const ParsedArgs q = parse_arguments(
      5, std::array<const char*, 5>{"spinshield", "--config", yaml.c_str(), "--g", "0.001"}.data());
  EXPECT_EQ(q.config.spec.g, 0.001);

  const std::string json = (dir_ / "run.json").string();
  std::ofstream(json) << R"({"command": "enumerate", "cluster": {"n_buffer": 4}})";
  const std::string out = out_dir("json");
  ASSERT_EQ(invoke({"--config", json, "--output-dir", out}), kExitOk) << err_.str();
  std::ifstream f(fs::path(out) / "graphs.csv");
  EXPECT_EQ(CsvTable::read(f).rows.size(), 64u);

  const std::string pt = out_dir("pt");
  ASSERT_EQ(invoke({"--config", yaml, "--output-dir", pt}), kExitOk) << err_.str();
  std::ifstream r(fs::path(pt) / "protection_time.csv");
  const CsvTable t = CsvTable::read(r);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0][t.column_index("metric")], "coh_l1");
}

TEST_F(CliTest, MissingConfigIsIoError) {
  EXPECT_EQ(invoke({"--config", (dir_ / "nope.yaml").string()}), kExitIo);
}

TEST_F(CliTest, AtomicWriteReplacesWholeFile) {
  const std::string path = (dir_ / "file.txt").string();
  write_atomically(path, "first version, longer\n");
  write_atomically(path, "second\n");
  EXPECT_EQ(slurp(path), "second\n");
  EXPECT_THROW(write_atomically((dir_ / "missing" / "x.txt").string(), "x"), std::runtime_error);
}

TEST(Commands, RoundTrip) {
  for (Command c : {Command::enumerate, Command::simulate, Command::protection_time, Command::compare, Command::sweep,
                    Command::heat, Command::reproduce_table}) {
    EXPECT_EQ(parse_command(to_string(c)), c);
  }
  EXPECT_EQ(to_string(Command::reproduce_table), "reproduce-table");
  EXPECT_THROW(parse_command("fly"), ParseError);
}

}  // namespace
}  // namespace spinshield::cli

// Copyright 2026 The prbox Authors
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

// Drives the prbox executable end to end.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "prbox/channels.hpp"
#include "prbox/io.hpp"

namespace {

namespace fs = std::filesystem;
using prbox::io::json;

struct Result {
  int status;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(PRBOX_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("prbox_cli_" + std::to_string(::testing::UnitTest::GetInstance()
                                              ->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

TEST_F(CliTest, ChshDemoJson) {
  const auto r = run("chsh-demo --format json");
  ASSERT_EQ(r.status, 0);
  const auto j = json::parse(r.out);
  const auto c = j.at("correlators");
  EXPECT_NEAR(c[0].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(c[1].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(c[2].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(c[3].get<double>(), -1.0, 1e-12);
  EXPECT_NEAR(j.at("chsh").get<double>(), 4.0, 1e-12);
  const auto box = prbox::io::box_from_json(j);
  EXPECT_LE(prbox::boxes::max_abs_difference(box, prbox::boxes::make_pr_box()),
            1e-12);
}

TEST_F(CliTest, ChshDemoTextUsesTwelveDigits) {
  const auto r = run("chsh-demo");
  ASSERT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("CHSH = 4\n"), std::string::npos);
  EXPECT_NE(r.out.find("<Z1 Z1> = -1\n"), std::string::npos);
}

TEST_F(CliTest, PrBoxFormatsRoundTrip) {
  const auto csv = run("pr-box --format csv --out " + path("pr.csv"));
  ASSERT_EQ(csv.status, 0);
  EXPECT_EQ(prbox::io::box_from_csv(slurp(path("pr.csv"))).table(),
            prbox::boxes::make_pr_box().table());
  const auto js = run("pr-box --format json");
  ASSERT_EQ(js.status, 0);
  EXPECT_EQ(prbox::io::box_from_json(json::parse(js.out)).table(),
            prbox::boxes::make_pr_box().table());
}

TEST_F(CliTest, NoSignalingOnFiles) {
  ASSERT_EQ(run("pr-box --format json --out " + path("pr.json")).status, 0);
  const auto ok = run("no-signaling --format json --in " + path("pr.json"));
  ASSERT_EQ(ok.status, 0);
  EXPECT_TRUE(json::parse(ok.out).at("no_signaling").get<bool>());

  std::ofstream(path("signal.csv"))
      << "0.5,0.5,0,0\n0.5,0,0.5,0\n0.5,0.5,0,0\n0.5,0,0.5,0\n";
  const auto bad = run("no-signaling --format json --in " + path("signal.csv"));
  EXPECT_EQ(bad.status, 1);
  EXPECT_DOUBLE_EQ(json::parse(bad.out).at("max_violation").get<double>(), 0.5);
}

TEST_F(CliTest, LocalBound) {
  const auto r = run("local-bound --format json");
  ASSERT_EQ(r.status, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j.at("maximum").get<double>(), 2.0);
  EXPECT_EQ(j.at("count_at_plus_two").get<int>(), 8);
  for (const auto& s : j.at("strategies")) {
    const double v = s.at("chsh").get<double>();
    EXPECT_TRUE(v == 2.0 || v == -2.0);
  }

  ASSERT_EQ(run("pr-box --format json --out " + path("pr.json")).status, 0);
  const auto pr = run("local-bound --format json --in " + path("pr.json"));
  EXPECT_FALSE(json::parse(pr.out).at("local").get<bool>());
  std::ofstream(path("uniform.csv"))
      << "0.25,0.25,0.25,0.25\n0.25,0.25,0.25,0.25\n"
         "0.25,0.25,0.25,0.25\n0.25,0.25,0.25,0.25\n";
  const auto uni = run("local-bound --format json --in " + path("uniform.csv"));
  EXPECT_TRUE(json::parse(uni.out).at("local").get<bool>());
}

TEST_F(CliTest, TsirelsonJson) {
  const auto r = run("tsirelson --format json --seed 1");
  ASSERT_EQ(r.status, 0);
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j.at("value").get<double>(), 2.828427124746, 1e-6);
  EXPECT_EQ(j.at("alice").size(), 2u);
  EXPECT_EQ(j.at("bob").size(), 2u);
  EXPECT_FALSE(j.at("trace").empty());
  EXPECT_EQ(prbox::io::matrix_from_json(j.at("state")).rows(), 4u);
}

TEST_F(CliTest, SimulateWritesTranscriptsAndIsDeterministic) {
  const auto a = run("simulate --format json --n-runs 2000 --seed 5 --transcript " +
                     path("log.jsonl"));
  ASSERT_EQ(a.status, 0);
  const auto j = json::parse(a.out);
  EXPECT_EQ(j.at("chsh").get<double>(), 4.0);
  EXPECT_TRUE(j.at("transcripts_consistent").get<bool>());

  std::ifstream log(path("log.jsonl"));
  std::string line;
  int lines = 0;
  while (std::getline(log, line)) {
    const auto t = json::parse(line);
    const unsigned k = t.at("key"), ab = t.at("a").get<unsigned>() & t.at("b").get<unsigned>();
    EXPECT_EQ(t.at("alice_out").get<unsigned>(), k);
    EXPECT_EQ(t.at("bob_out").get<unsigned>(), k ^ ab);
    EXPECT_EQ(t.at("msg"), t.at("a"));
    ++lines;
  }
  EXPECT_EQ(lines, 2000);

  const auto b = run("simulate --format json --n-runs 2000 --seed 5");
  EXPECT_EQ(json::parse(b.out).at("p"), j.at("p"));
}

TEST_F(CliTest, SimulateSingleRunReportsMissingCells) {
  const auto r = run("simulate --format json --n-runs 1 --seed 3");
  ASSERT_EQ(r.status, 0);
  const auto j = json::parse(r.out);
  EXPECT_TRUE(j.at("chsh").is_null());
  int nulls = 0;
  for (const auto& [k, v] : j.at("p").items()) nulls += v.is_null();
  EXPECT_EQ(nulls, 12);
}

TEST_F(CliTest, VerifyAllPassesByDefault) {
  const auto r = run("verify-all --format json");
  ASSERT_EQ(r.status, 0);
  const auto j = json::parse(r.out);
  EXPECT_TRUE(j.at("passed").get<bool>());
  for (const auto& c : j.at("checks")) {
    if (c.at("name") == "tsirelson") {
      EXPECT_NEAR(c.at("value").get<double>(), 2.8284271247, 1e-6);
    }
  }
}

TEST_F(CliTest, VerifyAllFailsOnCorruptedChannel) {
  const auto shape = prbox::linalg::qubits(2);
  const prbox::channels::DensityOperator cor(
      prbox::linalg::ComplexMatrix::diagonal({0.75, 0.0, 0.0, 0.25}), shape);
  const auto acor = prbox::channels::make_prepared_states().second;
  const std::array<prbox::channels::DensityOperator, 4> prepared{cor, cor, cor,
                                                                 acor};
  std::ofstream(path("bad.json"))
      << prbox::io::channel_to_json(prbox::channels::measure_and_prepare(prepared))
             .dump();
  const auto r = run("verify-all --format json --n-runs 1000 --restarts 2 --channel " +
                     path("bad.json"));
  EXPECT_EQ(r.status, 1);
  const auto j = json::parse(r.out);
  EXPECT_FALSE(j.at("passed").get<bool>());
  for (const auto& c : j.at("checks")) {
    if (c.at("name") == "box_identity") {
      EXPECT_FALSE(c.at("passed").get<bool>());
    }
  }
}

TEST_F(CliTest, ExportedChannelAndChoiRoundTrip) {
  ASSERT_EQ(run("export-channel --out " + path("phi.json")).status, 0);
  const auto ch = prbox::io::channel_from_json(json::parse(slurp(path("phi.json"))));
  EXPECT_EQ(ch.kraus().size(), 16u);
  const auto choi = run("export-channel --choi --channel " + path("phi.json"));
  ASSERT_EQ(choi.status, 0);
  const auto c = prbox::io::choi_from_json(json::parse(choi.out));
  EXPECT_LE(prbox::linalg::frobenius_distance(
                c.matrix(),
                prbox::channels::to_choi(prbox::channels::make_pr_channel()).matrix()),
            1e-12);
  // The exported channel drives chsh-demo.
  const auto demo = run("chsh-demo --format json --channel " + path("phi.json"));
  EXPECT_NEAR(json::parse(demo.out).at("chsh").get<double>(), 4.0, 1e-12);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("no-such-command").status, 2);
  EXPECT_EQ(run("simulate --n-runs 0").status, 2);
  EXPECT_EQ(run("no-signaling --tol -1").status, 2);
  EXPECT_EQ(run("tsirelson --format csv").status, 2);
  EXPECT_EQ(run("chsh-demo --format yaml").status, 2);
  EXPECT_EQ(run("pr-box --help").status, 0);
}

}  // namespace

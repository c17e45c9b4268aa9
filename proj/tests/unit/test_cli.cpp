#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <unistd.h>

#include "ppt/ensembles.hpp"
#include "ppt/io.hpp"
#include "ppt/sweep.hpp"
#include "pptool/cli.hpp"

namespace fs = std::filesystem;
using ppt::Json;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = pptool::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("pptcli_" + std::string(info->name()) + "_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& text) const {
    const fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p.string();
  }
  std::string state_file(const std::string& name, const ppt::DensityMatrix& rho) const {
    return file(name, ppt::density_to_json(rho).dump());
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, WitnessGrid) {
  const CliRun r = cli({"witness", "6"});
  EXPECT_EQ(r.code, pptool::kExitOk);
  EXPECT_EQ(r.out, "1,3,6,10,15\n");
  const CliRun j = cli({"witness", "4", "--format", "json"});
  EXPECT_EQ(j.code, 0);
  EXPECT_EQ(Json::parse(j.out).at("rows").size(), 3u);
  EXPECT_EQ(cli({"witness", "1"}).code, pptool::kExitInvalid);
}

TEST_F(CliTest, AnalyzeBellAndMixed) {
  CliRun r = cli({"analyze", state_file("bell.json", ppt::maximally_entangled(2))});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out).at("negative_count"), 1);

  r = cli({"analyze", file("mixed.json", R"({"dim":4,"dimA":2,"dimB":2,
      "re":[[0.25,0,0,0],[0,0.25,0,0],[0,0,0.25,0],[0,0,0,0.25]]})")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out).at("negative_count"), 0);
}

TEST_F(CliTest, AnalyzeErrorsMapToExitCodes) {
  CliRun r = cli({"analyze", file("trace.json", R"({"dim":4,"dimA":2,"dimB":2,"re":[0.225,0,0,0, 0,0.225,0,0, 0,0,0.225,0, 0,0,0,0.225]})")});
  EXPECT_EQ(r.code, pptool::kExitInvalid);
  EXPECT_NE(r.err.find("trace"), std::string::npos);
  EXPECT_NE(r.err.find("0.1"), std::string::npos);

  r = cli({"analyze", file("notpsd.json", R"({"dim":4,"dimA":2,"dimB":2,"re":[0.6,0,0,0, 0,0.6,0,0, 0,0,0.1,0, 0,0,0,-0.3]})")});
  EXPECT_EQ(r.code, pptool::kExitInvalid);
  EXPECT_NE(r.err.find("psd"), std::string::npos);

  EXPECT_EQ(cli({"analyze", path("missing.json")}).code, pptool::kExitIo);

  r = cli({"analyze", file("broken.json", "{\"dim\": 4,\n \"re\": [1, 2,\n")});
  EXPECT_EQ(r.code, pptool::kExitParse);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;

  r = cli({"analyze", file("nore.json", R"({"dim":4,"dimA":2,"dimB":2})")});
  EXPECT_EQ(r.code, pptool::kExitParse);
  EXPECT_NE(r.err.find("'re'"), std::string::npos);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(cli({}).code, pptool::kExitInvalid);
  EXPECT_EQ(cli({"frobnicate"}).code, pptool::kExitInvalid);
  const CliRun help = cli({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("sweep"), std::string::npos);
}

TEST_F(CliTest, AudenaertSmallRun) {
  const CliRun r = cli({"audenaert", "--samples", "1000", "--seed", "5", "--out-dir", path("ce")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("no violation"), std::string::npos);
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j.at("violations"), 0);
  EXPECT_EQ(j.at("master_seed"), 5);
}

TEST_F(CliTest, AudenaertSeedFromEnvironment) {
  ::setenv("PPTOOL_SEED", "77", 1);
  const CliRun r = cli({"audenaert", "--samples", "10", "--out-dir", path("ce")});
  ::unsetenv("PPTOOL_SEED");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out).at("master_seed"), 77);
}

TEST_F(CliTest, AudenaertBreachExitsOne) {
  const CliRun r = cli({"audenaert", "--samples", "3", "--threshold", "1", "--out-dir", path("ce")});
  EXPECT_EQ(r.code, pptool::kExitBreach);
  EXPECT_NE(r.err.find("counterexample written"), std::string::npos);
  EXPECT_EQ(Json::parse(r.out).at("counterexamples").size(), 3u);
}

TEST_F(CliTest, TableOnEmptyCheckpoints) {
  const std::string zero = file("zero.jsonl", "");
  CliRun r = cli({"table", zero});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "| M \\ N |\n|---|\n");

  ppt::SweepConfig c;
  c.dims = {ppt::BipartiteShape(2, 2)};
  c.samples_per_cell = 10;
  c.sample_end = 0;
  c.checkpoint_path = path("header_only.jsonl");
  ppt::run_sweep(c);
  r = cli({"table", c.checkpoint_path.string(), "--format", "json"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(Json::parse(r.out).at("cells").empty());
}

TEST_F(CliTest, SweepThenTable) {
  const std::string ck = path("ck.jsonl");
  const std::string cfg = file("cfg.json", Json{{"dims", {{2, 2}, {2, 3}}},
                                                {"samples_per_cell", 500},
                                                {"master_seed", 3},
                                                {"workers", 2},
                                                {"checkpoint_path", ck}}
                                               .dump());
  CliRun r = cli({"sweep", cfg, "--format", "json", "--paper-table"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j.at("cells").size(), 2u);
  EXPECT_EQ(j.at("cells")[0].at("max_negative_count"), 1);

  r = cli({"table", ck, "--format", "csv"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 3);

  EXPECT_EQ(cli({"sweep", cfg, "--seed", "4"}).code, pptool::kExitInvalid);
  EXPECT_EQ(cli({"table", ck, "--format", "html"}).code, pptool::kExitInvalid);
}

TEST_F(CliTest, SweepBreachExitsOneWithPath) {
  const std::string cfg = file("cfg.json", Json{{"dims", {{2, 2}}},
                                                {"samples_per_cell", 30},
                                                {"check_audenaert", true},
                                                {"audenaert_threshold", 1.0},
                                                {"checkpoint_path", path("ck.jsonl")}}
                                               .dump());
  const CliRun r = cli({"sweep", cfg});
  EXPECT_EQ(r.code, pptool::kExitBreach);
  EXPECT_NE(r.err.find("counterexample written"), std::string::npos);
}

TEST_F(CliTest, SweepConfigErrors) {
  EXPECT_EQ(cli({"sweep", file("bad.json", "{\"dims\": [[2,2]], \"typo\": 1}")}).code, pptool::kExitParse);
  EXPECT_EQ(cli({"sweep", file("bad2.json", "{\"dims\": [[2,2]")}).code, pptool::kExitParse);
  EXPECT_EQ(cli({"sweep", path("none.json")}).code, pptool::kExitIo);
}

TEST_F(CliTest, TheoremSubcommands) {
  const std::string bell = state_file("bell.json", ppt::maximally_entangled(2));
  CliRun r = cli({"theorem2", bell});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(Json::parse(r.out).at("applicable").get<bool>());

  r = cli({"theorem3", state_file("w.json", ppt::werner_state(0.7))});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_TRUE(j.at("applicable").get<bool>());
  EXPECT_GE(j.at("abs_pt_pt_min_eig").get<double>(), -1e-9);

  const ppt::DensityMatrix rect = ppt::hilbert_schmidt_random(ppt::BipartiteShape(2, 3), {1, 1});
  EXPECT_EQ(cli({"theorem3", state_file("rect.json", rect)}).code, pptool::kExitInvalid);
  EXPECT_EQ(cli({"theorem2", state_file("rect2.json", rect)}).code, pptool::kExitInvalid);
}

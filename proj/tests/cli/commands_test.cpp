#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "spinekit/cli/commands.hpp"

namespace spinekit::cli {
namespace {

namespace fs = std::filesystem;

class CommandTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("spinekit_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    ::unsetenv(kOutDirVariable);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write_config(const std::string& text) const {
    const auto path = dir_ / "config.yaml";
    std::ofstream(path) << text;
    return path.string();
  }

  CommandOptions options_for(const std::string& config, const std::string& out = "out") const {
    CommandOptions o;
    o.config_path = config;
    o.out_dir = (dir_ / out).string();
    return o;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  int run(const std::string& command, const CommandOptions& o) { return run_command(command, o, log_); }

  fs::path dir_;
  std::ostringstream log_;
};

const char* kSmall = R"(
model:
  offspring: {2: 1.0}
query: {k: 2, horizon: 1.0}
run: {replicates: 2000, seed: 5}
)";

TEST_F(CommandTest, EstimateWritesBothReports) {
  ASSERT_EQ(run("estimate", options_for(write_config(kSmall))), kExitOk) << log_.str();
  const auto json = nlohmann::json::parse(slurp(dir_ / "out" / "estimate.json"));
  EXPECT_EQ(json["schema"], "spinekit.report/1");
  EXPECT_EQ(json["version"], SPINEKIT_VERSION);
  EXPECT_EQ(json["seed"], 5);
  EXPECT_EQ(json["config"]["hash"].get<std::string>().size(), 16u);
  EXPECT_FALSE(json["result"].contains("wall_seconds"));
  EXPECT_NEAR(json["closed_form"]["value"].get<double>(), 12.0598303694, 1e-8);
  const auto csv = slurp(dir_ / "out" / "estimate.csv");
  EXPECT_EQ(csv.rfind("command,time,k,horizon,statistic,estimator,estimate", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
}

TEST_F(CommandTest, FormatSelectsOneFile) {
  auto o = options_for(write_config(kSmall));
  o.format = "csv";
  ASSERT_EQ(run("direct", o), kExitOk);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "direct.csv"));
  EXPECT_FALSE(fs::exists(dir_ / "out" / "direct.json"));
}

TEST_F(CommandTest, SeedIsMandatory) {
  EXPECT_EQ(run("estimate", options_for(write_config("query: {k: 1}\n"))), kExitUsage);
  EXPECT_NE(log_.str().find("seed"), std::string::npos);
}

TEST_F(CommandTest, SeedFlagOverridesConfig) {
  auto o = options_for(write_config(kSmall));
  o.seed = 99;
  ASSERT_EQ(run("direct", o), kExitOk);
  EXPECT_EQ(nlohmann::json::parse(slurp(dir_ / "out" / "direct.json"))["seed"], 99);
}

TEST_F(CommandTest, InvalidPmfIsAUsageError) {
  EXPECT_EQ(run("estimate", options_for(SPINEKIT_CONFIG_DIR "/invalid_pmf.yaml")), kExitUsage);
  EXPECT_NE(log_.str().find("sums to 0.9"), std::string::npos) << log_.str();
}

TEST_F(CommandTest, ExplosionWritesAPartialReport) {
  const auto config = write_config(R"(
model:
  offspring: {3: 1.0}
  rate: {kind: constant, value: 6.0}
query: {horizon: 3.0}
run: {replicates: 10, seed: 1, population_cap: 500}
)");
  EXPECT_EQ(run("direct", options_for(config)), kExitSimulation);
  const auto json = nlohmann::json::parse(slurp(dir_ / "out" / "direct.json"));
  EXPECT_EQ(json["status"], "error");
  EXPECT_GE(json["partial"]["particles"].get<int>(), 500);
}

TEST_F(CommandTest, EnvironmentOverridesOutputDirButNotFlag) {
  const auto config = write_config(std::string(kSmall) + "output: {dir: " + (dir_ / "from_config").string() + "}\n");
  CommandOptions o;
  o.config_path = config;
  ::setenv(kOutDirVariable, (dir_ / "from_env").string().c_str(), 1);
  ASSERT_EQ(run("estimate", o), kExitOk);
  EXPECT_TRUE(fs::exists(dir_ / "from_env" / "estimate.json"));
  EXPECT_FALSE(fs::exists(dir_ / "from_config"));
  o.out_dir = (dir_ / "from_flag").string();
  ASSERT_EQ(run("estimate", o), kExitOk);
  EXPECT_TRUE(fs::exists(dir_ / "from_flag" / "estimate.json"));
  ::unsetenv(kOutDirVariable);
}

TEST_F(CommandTest, OutputsIndependentOfWorkers) {
  const auto config = write_config(kSmall);
  auto one = options_for(config, "w1");
  one.workers = 1;
  auto many = options_for(config, "w4");
  many.workers = 4;
  for (const char* command : {"estimate", "direct"}) {
    ASSERT_EQ(run(command, one), kExitOk);
    ASSERT_EQ(run(command, many), kExitOk);
    for (const char* ext : {".json", ".csv"}) {
      EXPECT_EQ(slurp(dir_ / "w1" / (std::string(command) + ext)), slurp(dir_ / "w4" / (std::string(command) + ext)));
    }
  }
}

TEST_F(CommandTest, VerifyDiscreteSingleSpineGridPassesUnderBothConventions) {
  auto o = options_for(write_config("run: {seed: 1}\ngrid: {k: [1], generations: [1, 2, 3]}\n"));
  EXPECT_EQ(run("verify-discrete", o), kExitOk);
  o.unsound_per_edge_m = true;
  EXPECT_EQ(run("verify-discrete", o), kExitOk);
}

TEST_F(CommandTest, VerifyDiscretePerEdgeFailsOnSplits) {
  auto o = options_for(write_config("run: {seed: 1}\ngrid: {k: [2], generations: [2]}\n"));
  EXPECT_EQ(run("verify-discrete", o), kExitOk);
  o.unsound_per_edge_m = true;
  EXPECT_EQ(run("verify-discrete", o), kExitCheckFailed);
  const auto csv = slurp(dir_ / "out" / "verify-discrete.csv");
  EXPECT_NE(csv.find(",16,52,"), std::string::npos) << csv;
}

TEST_F(CommandTest, BoundsWithEmptyGridWritesHeaderOnly) {
  auto o = options_for(write_config("run: {seed: 1}\nbounds: {x: [], t: [1.0]}\n"));
  ASSERT_EQ(run("bounds", o), kExitOk);
  EXPECT_EQ(slurp(dir_ / "out" / "bounds.csv"), "x,t,lower,estimate,std_error,upper,upper_uncapped,bracketed\n");
}

TEST_F(CommandTest, BoundsRow) {
  auto o = options_for(write_config("run: {seed: 1, replicates: 5000}\nbounds: {x: [2], t: [1.0]}\n"));
  ASSERT_EQ(run("bounds", o), kExitOk);
  const auto json = nlohmann::json::parse(slurp(dir_ / "out" / "bounds.json"));
  EXPECT_NEAR(json["rows"][0]["upper"].get<double>(), 0.061842, 1e-6);
  EXPECT_TRUE(json["rows"][0]["bracketed"].get<bool>());
}

TEST_F(CommandTest, VerifyCtAtTimeZeroPasses) {
  auto o = options_for(write_config("query: {horizon: 0}\nrun: {seed: 3, replicates: 1000}\n"));
  EXPECT_EQ(run("verify-ct", o), kExitOk) << log_.str();
}

TEST_F(CommandTest, VerifyCtCatchesTheWrongRate) {
  auto o = options_for(write_config("query: {horizon: 1}\nrun: {seed: 3, replicates: 20000}\n"));
  o.unsound_wrong_rate = true;
  EXPECT_EQ(run("verify-ct", o), kExitCheckFailed) << log_.str();
}

TEST_F(CommandTest, MartingaleCheck) {
  auto o = options_for(write_config(
      "model: {zeta: {kind: absorbed}, origin: 1.0}\nquery: {horizon: 1}\nrun: {seed: 3, replicates: 5000}\n"));
  EXPECT_EQ(run("martingale-check", o), kExitOk) << log_.str();
}

TEST_F(CommandTest, UnknownCommand) { EXPECT_EQ(run("frobnicate", options_for(write_config(kSmall))), kExitUsage); }

}  // namespace
}  // namespace spinekit::cli

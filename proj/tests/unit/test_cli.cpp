#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"
#include "wealthsim/config.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(WEALTHSIM_CLI) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof(buf), pipe)) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("wealthsim_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string out(const std::string& sub = "") const { return (dir_ / sub).string(); }
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, HelpExitsZero) {
  const auto r = run("--help");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("sweep"), std::string::npos);
}

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("run --n notanumber").code, 2);
}

TEST_F(Cli, ConfigErrorsExitTwo) {
  const auto r = run("run --n 5 --quiet --out " + out());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("n must be at least 10"), std::string::npos);
  EXPECT_EQ(run("run --config does_not_exist.json --out " + out()).code, 2);
  EXPECT_EQ(run("run --scenario nope --out " + out()).code, 2);
  EXPECT_EQ(run("sweep --n 20 --t-max 5 --out " + out()).code, 2);
}

TEST_F(Cli, OverridesReachManifest) {
  const auto r = run("run --config smoke.json --n 40 --t-max 25 --reps 2 --seed 99 --quiet --out " +
                     out());
  ASSERT_EQ(r.code, 0) << r.out;
  const auto m = nlohmann::json::parse(slurp(dir_ / "manifest.json"));
  EXPECT_EQ(m["seed"], 99);
  EXPECT_EQ(m["config"]["n"], 40);
  EXPECT_EQ(m["config"]["t_max"], 25);
  EXPECT_EQ(m["command"], "run");
  for (const char* f : {"timeseries.csv", "sweep.csv", "persistence.csv"}) {
    EXPECT_TRUE(fs::exists(dir_ / f)) << f;
  }
}

TEST_F(Cli, ManifestReplaysIdentically) {
  ASSERT_EQ(run("compare --scenario baseline --scenario gamma --n 30 --t-max 40 --reps 2 --quiet --out " +
                out("a")).code,
            0);
  ASSERT_EQ(run("run --config " + out("a/manifest.json") + " --quiet --out " + out("b")).code, 0);
  EXPECT_EQ(slurp(dir_ / "a" / "timeseries.csv"), slurp(dir_ / "b" / "timeseries.csv"));
}

TEST_F(Cli, ThreadCountDoesNotChangeOutput) {
  const std::string base = "run --config smoke.json --reps 4 --quiet --scenario prog_welfare --scenario two_factor";
  ASSERT_EQ(run(base + " --threads 1 --out " + out("a")).code, 0);
  ASSERT_EQ(run(base + " --threads 3 --out " + out("b")).code, 0);
  EXPECT_EQ(slurp(dir_ / "a" / "timeseries.csv"), slurp(dir_ / "b" / "timeseries.csv"));
  EXPECT_EQ(slurp(dir_ / "a" / "diagnostics.csv"), slurp(dir_ / "b" / "diagnostics.csv"));
}

TEST_F(Cli, SweepAndPersistence) {
  ASSERT_EQ(run("sweep --n 20 --t-max 10 --reps 1 --mu 0.02 0.04 --sigma 0.05 --quiet --out " + out("s")).code, 0);
  EXPECT_EQ(slurp(dir_ / "s" / "sweep.csv").find("mu,sigma,gini_final,mobility_final\n0.02,0.05,"), 0u);
  ASSERT_EQ(run("persistence --n 200 --t-max 40 --reps 2 --selections 5 10 --horizon 20 --quiet --out " + out("p")).code, 0);
  const auto traj = slurp(dir_ / "p" / "persistence_trajectory.csv");
  EXPECT_EQ(std::count(traj.begin(), traj.end(), '\n'), 1 + 2 * 20);
  EXPECT_EQ(run("persistence --n 200 --t-max 40 --selections 30 --horizon 20 --quiet --out " + out("q")).code, 2);
}

TEST_F(Cli, PaperPresetExecutesWithOverrides) {
  const auto r = run("run --config paper.json --n 100 --t-max 100 --reps 2 --quiet --out " + out());
  ASSERT_EQ(r.code, 0) << r.out;
  const auto m = nlohmann::json::parse(slurp(dir_ / "manifest.json"));
  EXPECT_EQ(m["config"]["scenarios"].size(), 2u);
}

TEST_F(Cli, PresetsListAndShow) {
  const auto r = run("presets");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("paper.json"), std::string::npos);
  EXPECT_NE(r.out.find("prog_welfare"), std::string::npos);
  const auto show = run("presets --show desk.json");
  EXPECT_EQ(show.code, 0);
  EXPECT_EQ(wealthsim::config_from_json(show.out), *wealthsim::preset("desk.json"));
  EXPECT_EQ(run("presets --show missing.json").code, 2);
}

TEST_F(Cli, CheckedInPresetsMatchBuiltins) {
  for (const auto& name : wealthsim::preset_names()) {
    const fs::path file = fs::path(WEALTHSIM_PRESET_DIR) / name;
    ASSERT_TRUE(fs::exists(file)) << file;
    EXPECT_EQ(wealthsim::load_config(file.string()), *wealthsim::preset(name)) << name;
  }
}

TEST_F(Cli, UnwritableOutputExitsOne) {
  fs::create_directories(dir_);
  std::ofstream(dir_ / "file") << "x";
  const auto r = run("run --config smoke.json --quiet --out " + out("file/sub"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("file"), std::string::npos);
}

TEST_F(Cli, CompareSharesSeed) {
  const auto r = run("compare --scenario compound --scenario simple --seed 7 --n 50 --t-max 20 --reps 2 --quiet --out " + out());
  ASSERT_EQ(r.code, 0) << r.out;
  const auto ts = slurp(dir_ / "timeseries.csv");
  EXPECT_NE(ts.find("\ncompound,ensemble,20,"), std::string::npos);
  EXPECT_NE(ts.find("\nsimple,ensemble,20,"), std::string::npos);
  const auto m = nlohmann::json::parse(slurp(dir_ / "manifest.json"));
  EXPECT_EQ(m["seed"], 7);
  EXPECT_EQ(m["command"], "compare");
}

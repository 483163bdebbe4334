#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

#include "json.hpp"
#include "wealthsim/errors.hpp"
#include "wealthsim/output.hpp"

using namespace wealthsim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::size_t count_fields(const std::string& line) {
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

OutputBundle small_bundle() {
  OutputBundle b;
  b.command = "run";
  b.config.agents = 50;
  b.config.t_max = 30;
  b.config.replications = 2;
  b.config.scenarios = {named_scenario("baseline"), named_scenario("prog_ps")};
  b.scenarios = run_scenarios(b.config);
  return b;
}

fs::path temp_dir(const std::string& name) {
  auto p = fs::temp_directory_path() / ("wealthsim_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(Output, NumberFormat) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1000.0), "1000");
  EXPECT_EQ(format_number(kMissing), "");
  EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Output, TimeseriesSchema) {
  const auto b = small_bundle();
  const auto csv = timeseries_csv(b.scenarios);
  EXPECT_EQ(first_line(csv),
            "scenario_id,replication,t,gini_mean,gini_std,mobility_mean,mobility_std,theil_mean,"
            "top1_mean,growth_mean,total_wealth_mean,mean_tax_rate,mean_redistribution_rate,"
            "top50_levy_ratio");
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ASSERT_EQ(count_fields(line), 14u) << line;
    ++rows;
  }
  EXPECT_EQ(rows, 2 * recorded_periods(b.config).size());
  EXPECT_NE(csv.find("baseline,ensemble,0,0,0,,,"), std::string::npos);
}

TEST(Output, PerReplicationRows) {
  auto b = small_bundle();
  b.config.per_replication_rows = true;
  b.scenarios = run_scenarios(b.config);
  const auto csv = timeseries_csv(b.scenarios);
  EXPECT_NE(csv.find("\nbaseline,0,30,"), std::string::npos);
  EXPECT_NE(csv.find("\nprog_ps,1,30,"), std::string::npos);
}

TEST(Output, EmptySweepIsHeaderOnly) {
  EXPECT_EQ(sweep_csv(std::nullopt), "mu,sigma,gini_final,mobility_final\n");
  EXPECT_EQ(persistence_csv(std::nullopt), std::string(kPersistenceHeader) + "\n");
  EXPECT_EQ(persistence_trajectory_csv(std::nullopt),
            std::string(kPersistenceTrajectoryHeader) + "\n");
}

TEST(Output, SweepRows) {
  auto c = small_bundle().config;
  c.replications = 1;
  c.sweep = SweepGrid{{0.02, 0.05}, {0.03}};
  const auto csv = sweep_csv(run_sweep(c));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_NE(csv.find("\n0.05,0.03,"), std::string::npos);
}

TEST(Output, ManifestRoundTrips) {
  const auto b = small_bundle();
  const auto text = manifest_json(b);
  const auto j = nlohmann::json::parse(text);
  EXPECT_EQ(j.at("seed").get<std::uint64_t>(), b.config.seed);
  EXPECT_EQ(j.at("rng_algorithm").get<std::string>(), std::string(kRngAlgorithm));
  EXPECT_TRUE(j.contains("code_version"));
  EXPECT_EQ(j.at("diagnostics").size(), 2u);
  EXPECT_EQ(config_from_json(text), b.config);
}

TEST(Output, WritesAllFiles) {
  const auto dir = temp_dir("out");
  const auto b = small_bundle();
  write_outputs(b, dir / "nested");
  for (const char* f : {"timeseries.csv", "diagnostics.csv", "sweep.csv", "persistence.csv",
                        "persistence_trajectory.csv", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(dir / "nested" / f)) << f;
  }
  EXPECT_EQ(slurp(dir / "nested" / "timeseries.csv"), timeseries_csv(b.scenarios));
  fs::remove_all(dir);
}

TEST(Output, UnwritableDirectory) {
  const auto dir = temp_dir("blocked");
  fs::create_directories(dir);
  std::ofstream(dir / "file") << "x";
  try {
    write_outputs(small_bundle(), dir / "file" / "sub");
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("file"), std::string::npos);
  }
  fs::remove_all(dir);
}

TEST(Output, DiagnosticsCarrySavingsShare) {
  OutputBundle b;
  b.config.agents = 20;
  b.config.t_max = 20;
  b.config.replications = 2;
  b.config.scenarios = {named_scenario("two_factor")};
  b.scenarios = run_scenarios(b.config);
  const auto csv = diagnostics_csv(b.scenarios);
  EXPECT_EQ(first_line(csv), kDiagnosticsHeader);
  EXPECT_NE(csv.find("two_factor,ensemble,20,0,0."), std::string::npos);
}

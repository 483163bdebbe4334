#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wealthsim/config.hpp"
#include "wealthsim/harness.hpp"

namespace wealthsim {

/// Column order of timeseries.csv. Part of the file contract.
inline constexpr const char* kTimeseriesHeader =
    "scenario_id,replication,t,gini_mean,gini_std,mobility_mean,mobility_std,theil_mean,"
    "top1_mean,growth_mean,total_wealth_mean,mean_tax_rate,mean_redistribution_rate,"
    "top50_levy_ratio";
inline constexpr const char* kSweepHeader = "mu,sigma,gini_final,mobility_final";
inline constexpr const char* kPersistenceHeader = "t_sel,replication,agent_id,avg_norm_rank";
inline constexpr const char* kPersistenceTrajectoryHeader = "t_sel,dt,mean_norm_rank";
inline constexpr const char* kDiagnosticsHeader =
    "scenario_id,replication,t,mean_individual_tax_rate,savings_share_mean,savings_share_std,"
    "theil_std,top1_std,total_wealth_std,mean_tax_rate_std,growth_std";

/// Everything a command produces.
struct OutputBundle {
  std::string command;
  ExperimentConfig config;
  std::vector<EnsembleResult> scenarios;
  std::optional<SweepResult> sweep;
  std::optional<PersistenceResult> persistence;
};

/// Shortest round-trip decimal for finite values, empty for NaN.
std::string format_number(double value);

std::string timeseries_csv(const std::vector<EnsembleResult>& results);
std::string diagnostics_csv(const std::vector<EnsembleResult>& results);
std::string sweep_csv(const std::optional<SweepResult>& sweep);
std::string persistence_csv(const std::optional<PersistenceResult>& persistence);
std::string persistence_trajectory_csv(const std::optional<PersistenceResult>& persistence);

/// manifest.json: resolved config, seed, RNG algorithm, code version.
std::string manifest_json(const OutputBundle& bundle);

/// Writes timeseries.csv, diagnostics.csv, sweep.csv, persistence.csv,
/// persistence_trajectory.csv and manifest.json into `out_dir`, creating it if
/// needed. Throws IoError naming the path on failure.
void write_outputs(const OutputBundle& bundle, const std::filesystem::path& out_dir);

}  // namespace wealthsim

#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "wealthsim/config.hpp"
#include "wealthsim/metrics.hpp"

namespace wealthsim {

/// Everything recorded for one replication at one recorded period.
struct PeriodRecord {
  MetricsRecord metrics;
  double mean_tax_rate = 0.0;
  double mean_individual_tax_rate = 0.0;
  double mean_redistribution_rate = 0.0;
  double top50_levy_ratio = 0.0;
  /// Share of wealth from saved labour income; NaN unless the process tracks it.
  double savings_share = kMissing;
};

struct ReplicationResult {
  std::size_t replication = 0;
  std::vector<PeriodRecord> records;
  /// Time mean of aggregate growth over t = 1..t_max.
  double growth_time_mean = kMissing;
  std::size_t absorption_events = 0;
  std::size_t degenerate_periods = 0;
  /// Largest relative fiscal imbalance seen in any period: max of
  /// |sum tax - sum subsidy| and |total wealth before - after| over their scale.
  double max_conservation_error = 0.0;
  std::vector<PersistenceCohort> persistence;
};

/// Mean and population standard deviation over replications, skipping NaN.
struct Stat {
  double mean = kMissing;
  double std = kMissing;
};

Stat ensemble_stat(std::span<const double> values);

struct EnsembleRow {
  std::size_t t = 0;
  Stat gini, mobility, theil, top1, growth, total_wealth;
  Stat mean_tax_rate, mean_individual_tax_rate, mean_redistribution_rate, top50_levy_ratio;
  Stat savings_share;
};

struct EnsembleResult {
  Scenario scenario;
  std::size_t replications = 0;
  std::vector<EnsembleRow> rows;
  Stat growth_time_mean;
  std::size_t absorption_events = 0;
  std::size_t degenerate_periods = 0;
  double max_conservation_error = 0.0;
  /// Populated when per-replication output was requested.
  std::vector<ReplicationResult> per_replication;

  /// Row at period t; throws InternalError when t was not recorded.
  const EnsembleRow& at(std::size_t t) const;
  const EnsembleRow& final_row() const { return rows.back(); }
};

/// Periods with a metrics snapshot: 0, multiples of the stride, and t_max.
std::vector<std::size_t> recorded_periods(const ExperimentConfig& config);

/// Runs one replication of one scenario. `tracker` (may be null) receives
/// wealth snapshots for rank persistence.
ReplicationResult simulate_replication(const ExperimentConfig& config, const Scenario& scenario,
                                       std::size_t replication,
                                       PersistenceTracker* tracker = nullptr);

/// Merges replications in index order into ensemble statistics.
EnsembleResult merge_replications(const Scenario& scenario,
                                  std::vector<ReplicationResult> replications,
                                  bool keep_replications);

/// Runs `count` jobs on up to `threads` workers (0 = hardware concurrency).
/// The first exception by job index is rethrown after all workers stop.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& job);

/// Replications of one scenario; replication k uses stream keys (k, block).
EnsembleResult run_scenario(const ExperimentConfig& config, const Scenario& scenario);

/// All scenarios of the config under one base seed.
std::vector<EnsembleResult> run_scenarios(const ExperimentConfig& config);

struct SweepCell {
  double mu = 0.0;
  double sigma = 0.0;
  double gini_final = kMissing;
  double mobility_final = kMissing;
  EnsembleResult ensemble;
};

struct SweepResult {
  std::vector<double> mu;
  std::vector<double> sigma;
  /// Row-major: cells[i * sigma.size() + j] holds (mu[i], sigma[j]).
  std::vector<SweepCell> cells;

  const SweepCell& cell(std::size_t mu_index, std::size_t sigma_index) const {
    return cells.at(mu_index * sigma.size() + sigma_index);
  }
};

/// Replaces the first scenario's returns with Normal(mu, sigma) for each grid
/// cell. Every cell uses the config's base seed.
SweepResult run_sweep(const ExperimentConfig& config);

struct PersistenceAggregate {
  std::size_t t_sel = 0;
  /// Per replication, the selected agents and their time-averaged ranks.
  std::vector<std::vector<std::size_t>> agents;
  std::vector<std::vector<double>> avg_norm_rank;
  /// Mean normalized rank at dt = 1..horizon, averaged over replications.
  std::vector<double> mean_norm_rank;
};

struct PersistenceResult {
  EnsembleResult ensemble;
  std::vector<PersistenceAggregate> cohorts;
};

/// Rank persistence of the first scenario at the config's selection periods.
PersistenceResult run_persistence(const ExperimentConfig& config);

}  // namespace wealthsim

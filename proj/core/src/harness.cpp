#include "wealthsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "wealthsim/errors.hpp"
#include "wealthsim/fiscal.hpp"

namespace wealthsim {

Stat ensemble_stat(std::span<const double> values) {
  double sum = 0.0;
  std::size_t count = 0;
  for (double v : values) {
    if (!std::isnan(v)) {
      sum += v;
      ++count;
    }
  }
  if (count == 0) return {};
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : values) {
    if (!std::isnan(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (lo == hi) return {lo, 0.0};
  const double mean = sum / static_cast<double>(count);
  double sq = 0.0;
  for (double v : values) {
    if (!std::isnan(v)) sq += (v - mean) * (v - mean);
  }
  return {mean, std::sqrt(sq / static_cast<double>(count))};
}

const EnsembleRow& EnsembleResult::at(std::size_t t) const {
  auto it = std::lower_bound(rows.begin(), rows.end(), t,
                             [](const EnsembleRow& r, std::size_t v) { return r.t < v; });
  if (it == rows.end() || it->t != t) {
    throw InternalError("period " + std::to_string(t) + " was not recorded");
  }
  return *it;
}

std::vector<std::size_t> recorded_periods(const ExperimentConfig& config) {
  std::vector<std::size_t> periods;
  for (std::size_t t = 0; t <= config.t_max; t += config.record_stride) periods.push_back(t);
  if (periods.back() != config.t_max) periods.push_back(config.t_max);
  return periods;
}

namespace {

double relative_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

double savings_share(const PopulationState& state) {
  if (!state.tracks_components()) return kMissing;
  const double total = state.total_wealth();
  if (!(total > 0.0)) return kMissing;
  return std::accumulate(state.savings.begin(), state.savings.end(), 0.0) / total;
}

}  // namespace

ReplicationResult simulate_replication(const ExperimentConfig& config, const Scenario& scenario,
                                       std::size_t replication, PersistenceTracker* tracker) {
  const std::size_t n = config.agents;
  const bool two_factor = is_two_factor(scenario.process);
  auto state = PopulationState::uniform(n, initial_wealth(config, scenario), two_factor);
  state.labour_income = scenario.labour_income;

  CumulativeReturnLedger ledger;
  if (scenario.process == ProcessKind::Simple) ledger = CumulativeReturnLedger::start(state.wealth);

  StreamSet return_streams(config.seed, replication, Channel::Returns, n);
  std::optional<StreamSet> saving_streams;
  if (two_factor && scenario.saving == SavingPolicy::Uniform) {
    saving_streams.emplace(config.seed, replication, Channel::Savings, n);
  }
  std::vector<double> returns(n, 0.0);
  std::vector<double> saving_rates(n, 0.0);

  ReplicationResult result;
  result.replication = replication;
  const auto periods = recorded_periods(config);
  result.records.reserve(periods.size());
  auto is_recorded = [&](std::size_t t) {
    return std::binary_search(periods.begin(), periods.end(), t);
  };

  // Decile map of the period before the next recorded one, for mobility.
  DecileMap last_map;
  std::size_t last_map_period = 0;

  {
    PeriodRecord rec;
    rec.metrics = measure(0, state.wealth, nullptr, std::nullopt, &last_map);
    rec.savings_share = savings_share(state);
    result.records.push_back(rec);
  }
  if (tracker && tracker->needs(0)) tracker->observe(0, state.wealth);

  double growth_sum = 0.0;
  std::size_t growth_count = 0;

  for (std::size_t t = 1; t <= config.t_max; ++t) {
    const bool record = is_recorded(t);
    if (record && last_map_period != t - 1) {
      last_map = decile_map(state.wealth);
      last_map_period = t - 1;
    }
    const double prev_total = state.total_wealth();

    return_streams.fill_returns(scenario.returns, returns);
    switch (scenario.process) {
      case ProcessKind::Compound:
        result.absorption_events += step_compound(state, returns);
        break;
      case ProcessKind::DecreasingCompound:
        if (t > 1 && apply_decreasing_adjustment(returns, prev_total, scenario.decreasing_form)) {
          ++result.degenerate_periods;
        }
        result.absorption_events += step_compound(state, returns);
        break;
      case ProcessKind::Simple:
        result.absorption_events += step_simple(state, ledger, returns);
        break;
      case ProcessKind::TwoFactorNoReinvest:
      case ProcessKind::TwoFactorReinvest:
        if (saving_streams) saving_streams->fill_saving_rates(saving_rates);
        step_two_factor(state, returns, saving_rates,
                        scenario.process == ProcessKind::TwoFactorReinvest);
        break;
    }

    FiscalRecord fiscal;
    if (scenario.tax) {
      const double before = state.total_wealth();
      fiscal = apply_fiscal(state, *scenario.tax);
      if (fiscal.applied) {
        const double after = state.total_wealth();
        result.max_conservation_error =
            std::max({result.max_conservation_error,
                      relative_gap(fiscal.total_tax, fiscal.total_subsidy),
                      relative_gap(before, after)});
      }
    }

    const double total = state.total_wealth();
    if (auto g = aggregate_growth(total, prev_total)) {
      growth_sum += *g;
      ++growth_count;
    }

    if (record) {
      PeriodRecord rec;
      DecileMap now_map;
      rec.metrics = measure(t, state.wealth, &last_map, prev_total, &now_map);
      last_map = std::move(now_map);
      last_map_period = t;
      if (fiscal.applied) {
        rec.mean_tax_rate = fiscal.mean_tax_rate;
        rec.mean_individual_tax_rate = fiscal.mean_individual_tax_rate;
        rec.mean_redistribution_rate = fiscal.mean_redistribution_rate;
        rec.top50_levy_ratio = fiscal.top50_levy_ratio;
      }
      rec.savings_share = savings_share(state);
      result.records.push_back(rec);
    }
    if (tracker && tracker->needs(t)) tracker->observe(t, state.wealth);
  }

  if (growth_count > 0) result.growth_time_mean = growth_sum / static_cast<double>(growth_count);
  if (tracker) result.persistence = tracker->results();
  return result;
}

EnsembleResult merge_replications(const Scenario& scenario,
                                  std::vector<ReplicationResult> replications,
                                  bool keep_replications) {
  EnsembleResult out;
  out.scenario = scenario;
  out.replications = replications.size();
  if (replications.empty()) return out;

  const std::size_t periods = replications.front().records.size();
  for (const auto& r : replications) {
    if (r.records.size() != periods) throw InternalError("replications recorded different periods");
  }
  std::vector<double> column(replications.size());
  auto stat = [&](auto&& field) {
    for (std::size_t k = 0; k < replications.size(); ++k) column[k] = field(replications[k]);
    return ensemble_stat(column);
  };

  out.rows.resize(periods);
  for (std::size_t p = 0; p < periods; ++p) {
    EnsembleRow& row = out.rows[p];
    row.t = replications.front().records[p].metrics.t;
    const auto rec = [p](const ReplicationResult& r) -> const PeriodRecord& { return r.records[p]; };
    row.gini = stat([&](const auto& r) { return rec(r).metrics.gini; });
    row.mobility = stat([&](const auto& r) { return rec(r).metrics.mobility; });
    row.theil = stat([&](const auto& r) { return rec(r).metrics.theil; });
    row.top1 = stat([&](const auto& r) { return rec(r).metrics.top1_share; });
    row.growth = stat([&](const auto& r) { return rec(r).metrics.growth; });
    row.total_wealth = stat([&](const auto& r) { return rec(r).metrics.total_wealth; });
    row.mean_tax_rate = stat([&](const auto& r) { return rec(r).mean_tax_rate; });
    row.mean_individual_tax_rate = stat([&](const auto& r) { return rec(r).mean_individual_tax_rate; });
    row.mean_redistribution_rate = stat([&](const auto& r) { return rec(r).mean_redistribution_rate; });
    row.top50_levy_ratio = stat([&](const auto& r) { return rec(r).top50_levy_ratio; });
    row.savings_share = stat([&](const auto& r) { return rec(r).savings_share; });
  }
  out.growth_time_mean = stat([](const auto& r) { return r.growth_time_mean; });
  for (const auto& r : replications) {
    out.absorption_events += r.absorption_events;
    out.degenerate_periods += r.degenerate_periods;
    out.max_conservation_error = std::max(out.max_conservation_error, r.max_conservation_error);
  }
  if (keep_replications) out.per_replication = std::move(replications);
  return out;
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& job) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const auto workers = static_cast<std::size_t>(std::min<std::size_t>(threads, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::size_t error_index = count;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            job(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (i < error_index) {
              error_index = i;
              error = std::current_exception();
            }
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

EnsembleResult run_scenario(const ExperimentConfig& config, const Scenario& scenario) {
  validate(config);
  std::vector<ReplicationResult> reps(config.replications);
  parallel_for(config.replications, config.threads,
               [&](std::size_t k) { reps[k] = simulate_replication(config, scenario, k); });
  return merge_replications(scenario, std::move(reps), config.per_replication_rows);
}

std::vector<EnsembleResult> run_scenarios(const ExperimentConfig& config) {
  validate(config);
  const std::size_t s_count = config.scenarios.size();
  const std::size_t r_count = config.replications;
  std::vector<std::vector<ReplicationResult>> reps(s_count,
                                                   std::vector<ReplicationResult>(r_count));
  parallel_for(s_count * r_count, config.threads, [&](std::size_t job) {
    const std::size_t s = job / r_count;
    const std::size_t k = job % r_count;
    reps[s][k] = simulate_replication(config, config.scenarios[s], k);
  });
  std::vector<EnsembleResult> out;
  out.reserve(s_count);
  for (std::size_t s = 0; s < s_count; ++s) {
    out.push_back(
        merge_replications(config.scenarios[s], std::move(reps[s]), config.per_replication_rows));
  }
  return out;
}

SweepResult run_sweep(const ExperimentConfig& config) {
  validate(config);
  if (!config.sweep) throw ConfigError("sweep requested but the config has no 'sweep' grids");
  SweepResult result;
  result.mu = config.sweep->mu;
  result.sigma = config.sweep->sigma;
  const std::size_t cells = result.mu.size() * result.sigma.size();
  const std::size_t r_count = config.replications;

  std::vector<Scenario> scenarios(cells, config.scenarios.front());
  for (std::size_t i = 0; i < result.mu.size(); ++i) {
    for (std::size_t j = 0; j < result.sigma.size(); ++j) {
      Scenario& s = scenarios[i * result.sigma.size() + j];
      s.returns = NormalReturns{result.mu[i], result.sigma[j]};
      validate(s.returns);
    }
  }
  std::vector<std::vector<ReplicationResult>> reps(cells, std::vector<ReplicationResult>(r_count));
  parallel_for(cells * r_count, config.threads, [&](std::size_t job) {
    const std::size_t c = job / r_count;
    const std::size_t k = job % r_count;
    reps[c][k] = simulate_replication(config, scenarios[c], k);
  });
  result.cells.reserve(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    SweepCell cell;
    cell.mu = result.mu[c / result.sigma.size()];
    cell.sigma = result.sigma[c % result.sigma.size()];
    cell.ensemble = merge_replications(scenarios[c], std::move(reps[c]), false);
    cell.gini_final = cell.ensemble.final_row().gini.mean;
    cell.mobility_final = cell.ensemble.final_row().mobility.mean;
    result.cells.push_back(std::move(cell));
  }
  return result;
}

PersistenceResult run_persistence(const ExperimentConfig& config) {
  validate(config);
  if (!config.persistence) {
    throw ConfigError("persistence requested but the config has no 'persistence' block");
  }
  const auto& spec = *config.persistence;
  const Scenario& scenario = config.scenarios.front();
  std::vector<ReplicationResult> reps(config.replications);
  parallel_for(config.replications, config.threads, [&](std::size_t k) {
    PersistenceTracker tracker(spec.selections, spec.horizon);
    reps[k] = simulate_replication(config, scenario, k, &tracker);
  });

  PersistenceResult out;
  const std::size_t cohorts = reps.front().persistence.size();
  out.cohorts.resize(cohorts);
  for (std::size_t c = 0; c < cohorts; ++c) {
    auto& agg = out.cohorts[c];
    agg.t_sel = reps.front().persistence[c].t_sel;
    agg.mean_norm_rank.assign(spec.horizon, 0.0);
    for (const auto& r : reps) {
      const auto& cohort = r.persistence[c];
      agg.agents.push_back(cohort.agents);
      agg.avg_norm_rank.push_back(cohort.avg_norm_rank);
      for (std::size_t d = 0; d < spec.horizon; ++d) agg.mean_norm_rank[d] += cohort.mean_norm_rank[d];
    }
    for (double& v : agg.mean_norm_rank) v /= static_cast<double>(reps.size());
  }
  out.ensemble = merge_replications(scenario, std::move(reps), config.per_replication_rows);
  return out;
}

}  // namespace wealthsim

#include "wealthsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wealthsim/errors.hpp"

namespace wealthsim {

namespace {

/// Agent ids in ascending (wealth, id) order.
std::vector<std::size_t> ascending_order(std::span<const double> wealth) {
  std::vector<std::size_t> order(wealth.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return wealth[a] < wealth[b]; });
  return order;
}

double gini_sorted(std::span<const double> sorted) {
  const std::size_t n = sorted.size();
  // Equal holdings are exactly 0; the formula leaves rounding residue.
  if (n < 2 || sorted.front() == sorted.back()) return 0.0;
  double total = 0.0;
  double weighted = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    total += sorted[k];
    weighted += static_cast<double>(n - k) * sorted[k];
  }
  if (!(total > 0.0)) return 0.0;
  const double nn = static_cast<double>(n);
  const double g = ((nn + 1.0) - 2.0 * weighted / total) / (nn - 1.0);
  return std::clamp(g, 0.0, 1.0);
}

double top_share_sorted(std::span<const double> sorted, double total, double fraction) {
  const std::size_t n = sorted.size();
  if (n == 0 || !(total > 0.0)) return 0.0;
  auto count = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
  count = std::clamp<std::size_t>(count, 1, n);
  double top = 0.0;
  for (std::size_t k = n - count; k < n; ++k) top += sorted[k];
  return top / total;
}

std::array<std::size_t, kDeciles> decile_sizes(std::size_t n) {
  std::array<std::size_t, kDeciles> sizes{};
  for (std::size_t j = 0; j < kDeciles; ++j) sizes[j] = n / kDeciles + (j < n % kDeciles ? 1 : 0);
  return sizes;
}

double median_of_sorted_block(std::span<const double> block) {
  const std::size_t m = block.size();
  if (m == 0) return 0.0;
  return m % 2 == 1 ? block[m / 2] : 0.5 * (block[m / 2 - 1] + block[m / 2]);
}

DecileMap decile_map_sorted(const std::vector<std::size_t>& order,
                            std::span<const double> sorted) {
  const std::size_t n = sorted.size();
  if (n < kDeciles) throw ConfigError("decile map needs at least 10 agents");
  DecileMap map;
  map.size = decile_sizes(n);
  map.decile.resize(n);
  std::size_t begin = 0;
  for (std::size_t j = 0; j < kDeciles; ++j) {
    const std::size_t end = begin + map.size[j];
    for (std::size_t k = begin; k < end; ++k) map.decile[order[k]] = static_cast<std::uint8_t>(j);
    map.median[j] = median_of_sorted_block(sorted.subspan(begin, map.size[j]));
    begin = end;
  }
  return map;
}

std::array<double, kDeciles> decile_shares_sorted(std::span<const double> sorted, double total) {
  std::array<double, kDeciles> shares{};
  if (!(total > 0.0) || sorted.size() < kDeciles) return shares;
  const auto sizes = decile_sizes(sorted.size());
  std::size_t begin = 0;
  for (std::size_t j = 0; j < kDeciles; ++j) {
    double block = 0.0;
    for (std::size_t k = begin; k < begin + sizes[j]; ++k) block += sorted[k];
    shares[j] = block / total;
    begin += sizes[j];
  }
  return shares;
}

std::vector<double> gather(std::span<const double> wealth, const std::vector<std::size_t>& order) {
  std::vector<double> sorted(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) sorted[k] = wealth[order[k]];
  return sorted;
}

}  // namespace

double gini(std::span<const double> wealth) {
  std::vector<double> sorted(wealth.begin(), wealth.end());
  std::sort(sorted.begin(), sorted.end());
  return gini_sorted(sorted);
}

double theil(std::span<const double> wealth) {
  if (wealth.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(wealth.begin(), wealth.end());
  if (*lo == *hi) return 0.0;
  const double n = static_cast<double>(wealth.size());
  const double mean = std::accumulate(wealth.begin(), wealth.end(), 0.0) / n;
  if (!(mean > 0.0)) return 0.0;
  double acc = 0.0;
  for (double w : wealth) {
    if (w > 0.0) {
      const double x = w / mean;
      acc += x * std::log(x);
    }
  }
  return std::max(acc / n, 0.0);
}

double top_share(std::span<const double> wealth, double fraction) {
  std::vector<double> sorted(wealth.begin(), wealth.end());
  std::sort(sorted.begin(), sorted.end());
  return top_share_sorted(sorted, std::accumulate(sorted.begin(), sorted.end(), 0.0), fraction);
}

DecileMap decile_map(std::span<const double> wealth) {
  if (wealth.size() < kDeciles) throw ConfigError("decile map needs at least 10 agents");
  const auto order = ascending_order(wealth);
  return decile_map_sorted(order, gather(wealth, order));
}

std::array<double, kDeciles> decile_shares(std::span<const double> wealth) {
  std::vector<double> sorted(wealth.begin(), wealth.end());
  std::sort(sorted.begin(), sorted.end());
  return decile_shares_sorted(sorted, std::accumulate(sorted.begin(), sorted.end(), 0.0));
}

double weighted_mobility(const DecileMap& prev, const DecileMap& now) {
  const std::size_t n = now.decile.size();
  if (prev.decile.size() != n) throw InternalError("weighted_mobility: agent sets differ");
  if (n == 0) return 0.0;
  const double gap = std::abs(now.median[kDeciles - 1] - now.median[0]);
  if (!(gap > 0.0)) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += std::abs(now.median[prev.decile[i]] - now.median[now.decile[i]]);
  }
  return acc / (static_cast<double>(n) * gap);
}

std::vector<double> moving_average(std::span<const double> series, std::size_t window) {
  if (window == 0) throw ConfigError("moving average window must be positive");
  std::vector<double> out(series.size(), kMissing);
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t t = 0; t < series.size(); ++t) {
    if (!std::isnan(series[t])) {
      sum += series[t];
      ++count;
    }
    if (t >= window && !std::isnan(series[t - window])) {
      sum -= series[t - window];
      --count;
    }
    if (count > 0) out[t] = sum / static_cast<double>(count);
  }
  return out;
}

std::optional<double> aggregate_growth(double total_now, double total_prev) {
  if (!(total_prev > 0.0)) return std::nullopt;
  return (total_now - total_prev) / total_prev;
}

std::vector<double> normalized_ranks(std::span<const double> wealth) {
  const std::size_t n = wealth.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return wealth[a] > wealth[b]; });
  std::vector<double> ranks(n);
  for (std::size_t k = 0; k < n; ++k) {
    ranks[order[k]] = static_cast<double>(k + 1) / static_cast<double>(n);
  }
  return ranks;
}

std::vector<std::size_t> select_top(std::span<const double> wealth, double fraction) {
  const std::size_t n = wealth.size();
  if (n == 0) return {};
  const auto count = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9)), 1, n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return wealth[a] > wealth[b]; });
  order.resize(count);
  return order;
}

MetricsRecord measure(std::size_t t, std::span<const double> wealth, const DecileMap* prev,
                      std::optional<double> prev_total, DecileMap* now_map) {
  MetricsRecord record;
  record.t = t;
  const auto order = ascending_order(wealth);
  const auto sorted = gather(wealth, order);
  double total = 0.0;
  for (double w : sorted) total += w;
  record.total_wealth = total;
  record.gini = gini_sorted(sorted);
  record.theil = theil(wealth);
  record.top1_share = top_share_sorted(sorted, total, 0.01);
  record.decile_shares = decile_shares_sorted(sorted, total);
  if (prev_total) {
    if (auto g = aggregate_growth(total, *prev_total)) record.growth = *g;
  }
  if (wealth.size() >= kDeciles) {
    DecileMap map = decile_map_sorted(order, sorted);
    if (prev) record.mobility = weighted_mobility(*prev, map);
    if (now_map) *now_map = std::move(map);
  }
  return record;
}

// ---------------------------------------------------------------------------

PersistenceTracker::PersistenceTracker(std::vector<std::size_t> selection_periods,
                                       std::size_t horizon, double fraction)
    : horizon_(horizon), fraction_(fraction) {
  if (horizon == 0) throw ConfigError("persistence horizon must be positive");
  std::sort(selection_periods.begin(), selection_periods.end());
  selection_periods.erase(std::unique(selection_periods.begin(), selection_periods.end()),
                          selection_periods.end());
  for (std::size_t t_sel : selection_periods) {
    Cohort c;
    c.out.t_sel = t_sel;
    c.out.mean_norm_rank.assign(horizon, 0.0);
    cohorts_.push_back(std::move(c));
  }
}

bool PersistenceTracker::needs(std::size_t t) const {
  return std::any_of(cohorts_.begin(), cohorts_.end(), [&](const Cohort& c) {
    return t >= c.out.t_sel && t <= c.out.t_sel + horizon_;
  });
}

std::size_t PersistenceTracker::last_period() const noexcept {
  std::size_t last = 0;
  for (const auto& c : cohorts_) last = std::max(last, c.out.t_sel + horizon_);
  return last;
}

void PersistenceTracker::observe(std::size_t t, std::span<const double> wealth) {
  std::vector<double> ranks;
  for (auto& c : cohorts_) {
    if (t == c.out.t_sel) {
      c.out.agents = select_top(wealth, fraction_);
      c.rank_sum.assign(c.out.agents.size(), 0.0);
    } else if (t > c.out.t_sel && t <= c.out.t_sel + horizon_) {
      if (c.out.agents.empty()) {
        throw InternalError("persistence cohort observed before its selection period");
      }
      if (ranks.empty()) ranks = normalized_ranks(wealth);
      const std::size_t dt = t - c.out.t_sel;
      double cohort_sum = 0.0;
      for (std::size_t k = 0; k < c.out.agents.size(); ++k) {
        const double r = ranks[c.out.agents[k]];
        c.rank_sum[k] += r;
        cohort_sum += r;
      }
      c.out.mean_norm_rank[dt - 1] = cohort_sum / static_cast<double>(c.out.agents.size());
      ++c.observed;
    }
  }
}

std::vector<PersistenceCohort> PersistenceTracker::results() const {
  std::vector<PersistenceCohort> out;
  out.reserve(cohorts_.size());
  for (const auto& c : cohorts_) {
    if (c.observed != horizon_) {
      throw InternalError("persistence cohort at t=" + std::to_string(c.out.t_sel) +
                          " did not complete its horizon");
    }
    PersistenceCohort cohort = c.out;
    cohort.avg_norm_rank.resize(c.rank_sum.size());
    for (std::size_t k = 0; k < c.rank_sum.size(); ++k) {
      cohort.avg_norm_rank[k] = c.rank_sum[k] / static_cast<double>(horizon_);
    }
    out.push_back(std::move(cohort));
  }
  return out;
}

PersistenceCohort rank_persistence(const WealthTrajectory& trajectory, std::size_t t_sel,
                                   std::size_t horizon) {
  if (trajectory.empty()) throw ConfigError("rank_persistence: empty trajectory");
  const std::size_t t_max = trajectory.rbegin()->first;
  if (t_sel + horizon > t_max) {
    throw ConfigError("rank_persistence: t_sel + horizon = " + std::to_string(t_sel + horizon) +
                      " exceeds the last recorded period " + std::to_string(t_max));
  }
  PersistenceTracker tracker({t_sel}, horizon);
  for (std::size_t t = t_sel; t <= t_sel + horizon; ++t) {
    auto it = trajectory.find(t);
    if (it == trajectory.end()) {
      throw ConfigError("rank_persistence: no snapshot at period " + std::to_string(t));
    }
    tracker.observe(t, it->second);
  }
  return tracker.results().front();
}

}  // namespace wealthsim

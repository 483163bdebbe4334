#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace wealthsim {

inline constexpr std::size_t kDeciles = 10;
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

/// Small-sample Gini on the ascending-sorted vector:
///   G = [(N + 1) - 2 sum_k (N + 1 - k) w_k / sum_k w_k] / (N - 1)
/// Returns 0 for an all-zero vector or N < 2.
double gini(std::span<const double> wealth);

/// Theil T index (1/N) sum (w/mu) ln(w/mu); zero holdings contribute 0.
/// Returns 0 for an all-zero vector.
double theil(std::span<const double> wealth);

/// Share of total wealth held by the ceil(p N) wealthiest agents.
double top_share(std::span<const double> wealth, double fraction);

/// Decile assignment of each agent plus the median wealth of each decile.
/// Deciles are contiguous blocks of the (wealth, agent id) ascending order;
/// the first N mod 10 blocks hold one extra agent.
struct DecileMap {
  std::vector<std::uint8_t> decile;  // 0 = poorest, 9 = richest
  std::array<double, kDeciles> median{};
  std::array<std::size_t, kDeciles> size{};
};

/// Requires N >= 10 (throws ConfigError otherwise).
DecileMap decile_map(std::span<const double> wealth);

/// Share of total wealth held by each decile block, poorest first.
std::array<double, kDeciles> decile_shares(std::span<const double> wealth);

/// Weighted mobility: mean over agents of |Dec_t[j_prev(i)] - Dec_t[j_now(i)]|
/// divided by |Dec_t[top] - Dec_t[bottom]|, all medians taken from `now`.
/// Returns 0 when the top-bottom gap is 0.
double weighted_mobility(const DecileMap& prev, const DecileMap& now);

/// Trailing moving average; the first window-1 points average what is
/// available. NaN entries are skipped (an all-NaN window yields NaN).
std::vector<double> moving_average(std::span<const double> series, std::size_t window = 10);

/// (TW_t - TW_{t-1}) / TW_{t-1}; nullopt when TW_{t-1} <= 0.
std::optional<double> aggregate_growth(double total_now, double total_prev);

/// Rank / N with rank 1 the richest. Ties keep agent-id order.
std::vector<double> normalized_ranks(std::span<const double> wealth);

/// The max(1, floor(fraction N)) richest agents, richest first.
std::vector<std::size_t> select_top(std::span<const double> wealth, double fraction = 0.01);

/// Summary metrics of one snapshot.
struct MetricsRecord {
  std::size_t t = 0;
  double gini = 0.0;
  double theil = 0.0;
  double top1_share = 0.0;
  std::array<double, kDeciles> decile_shares{};
  double mobility = kMissing;
  double growth = kMissing;
  double total_wealth = 0.0;
};

/// Computes every snapshot metric with one sort. `prev` supplies the previous
/// period's decile map for mobility; `prev_total` the previous total wealth.
/// The current decile map is written to `now_map` when non-null.
MetricsRecord measure(std::size_t t, std::span<const double> wealth, const DecileMap* prev,
                      std::optional<double> prev_total, DecileMap* now_map = nullptr);

// ---------------------------------------------------------------------------
// Rank persistence of the top percentile.

struct PersistenceCohort {
  std::size_t t_sel = 0;
  std::vector<std::size_t> agents;
  /// Time-averaged normalized rank of each selected agent over the horizon.
  std::vector<double> avg_norm_rank;
  /// Mean normalized rank of the cohort at offsets dt = 1..horizon.
  std::vector<double> mean_norm_rank;
};

/// Streams wealth snapshots and accumulates rank persistence for a set of
/// selection periods without storing trajectories.
class PersistenceTracker {
 public:
  PersistenceTracker(std::vector<std::size_t> selection_periods, std::size_t horizon,
                     double fraction = 0.01);

  /// True when `observe` must be called at period t.
  bool needs(std::size_t t) const;

  void observe(std::size_t t, std::span<const double> wealth);

  /// Throws InternalError if some cohort has not completed its horizon.
  std::vector<PersistenceCohort> results() const;

  std::size_t horizon() const noexcept { return horizon_; }
  std::size_t last_period() const noexcept;

 private:
  struct Cohort {
    PersistenceCohort out;
    std::vector<double> rank_sum;
    std::size_t observed = 0;
  };

  std::size_t horizon_;
  double fraction_;
  std::vector<Cohort> cohorts_;
};

/// Wealth snapshots keyed by period.
using WealthTrajectory = std::map<std::size_t, std::vector<double>>;

/// Selects the top percentile at t_sel and follows its normalized ranks over
/// the next `horizon` periods. Throws ConfigError when t_sel + horizon lies
/// beyond the last stored period or a required snapshot is missing.
PersistenceCohort rank_persistence(const WealthTrajectory& trajectory, std::size_t t_sel,
                                   std::size_t horizon = 1000);

}  // namespace wealthsim

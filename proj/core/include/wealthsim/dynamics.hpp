#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace wealthsim {

/// Per-agent wealth at period `t`. `prev_wealth` holds the wealth at t-1 and is
/// empty before the first step. The inherited/savings decomposition is only
/// populated for the two-factor processes.
struct PopulationState {
  std::size_t t = 0;
  std::vector<double> wealth;
  std::vector<double> prev_wealth;
  std::vector<double> inherited;
  std::vector<double> savings;
  double labour_income = 1.0;

  static PopulationState uniform(std::size_t agents, double initial_wealth,
                                 bool track_components = false);

  std::size_t size() const noexcept { return wealth.size(); }
  bool tracks_components() const noexcept { return !inherited.empty(); }
  double total_wealth() const noexcept;
};

enum class ProcessKind {
  Compound,
  Simple,
  DecreasingCompound,
  TwoFactorNoReinvest,
  TwoFactorReinvest,
};

std::string_view to_string(ProcessKind kind) noexcept;
/// Throws ConfigError for unknown names.
ProcessKind parse_process_kind(std::string_view name);

bool is_two_factor(ProcessKind kind) noexcept;

/// Running sum of returns for the simple-return process. `absorbed` agents
/// have hit zero wealth and their sums are frozen.
struct CumulativeReturnLedger {
  std::vector<double> initial_wealth;
  std::vector<double> return_sum;
  std::vector<char> absorbed;

  static CumulativeReturnLedger start(std::span<const double> initial_wealth);
};

/// W <- (1 + r) W. Returns the number of agents newly absorbed at zero.
std::size_t step_compound(PopulationState& state, std::span<const double> returns);

/// W <- W_1 (1 + sum r), floored at 0 with absorption.
/// Returns the number of agents newly absorbed.
std::size_t step_simple(PopulationState& state, CumulativeReturnLedger& ledger,
                        std::span<const double> returns);

/// How the aggregate-wealth constraint is applied to a return.
///   Gross: (1 + r') = (1 + r) / ln(1 + TW)
///   Net:         r' = r / ln(1 + TW)
enum class DecreasingForm { Gross, Net };

std::string_view to_string(DecreasingForm form) noexcept;
DecreasingForm parse_decreasing_form(std::string_view name);

/// Rescales `returns` in place against total wealth `total_wealth`. Results are
/// clamped to r' >= -1. A non-positive total wealth is degenerate: every
/// adjusted gross return becomes 0. Returns true when degenerate.
bool apply_decreasing_adjustment(std::span<double> returns, double total_wealth,
                                 DecreasingForm form = DecreasingForm::Gross);

/// Two-factor update with labour income Y0 = state.labour_income.
///   reinvest = false: inherited part compounds, saved income accumulates
///                     without returns.
///   reinvest = true:  W <- W (1 + r) + s Y0, both components compound.
/// Throws ConfigError for a saving rate outside [0, 1].
void step_two_factor(PopulationState& state, std::span<const double> returns,
                     std::span<const double> saving_rates, bool reinvest);

/// Initial capital whose mean yield equals mean saved labour income:
/// mean_saving * labour_income / mean_return. Throws ConfigError unless
/// mean_return > 0.
double fair_initial_wealth(double mean_saving, double mean_return, double labour_income);

}  // namespace wealthsim

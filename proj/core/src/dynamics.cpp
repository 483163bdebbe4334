#include "wealthsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wealthsim/errors.hpp"

namespace wealthsim {

namespace {

void check_length(std::size_t expected, std::size_t actual, const char* what) {
  if (expected != actual) {
    throw InternalError(std::string(what) + ": expected " + std::to_string(expected) +
                        " entries, got " + std::to_string(actual));
  }
}

}  // namespace

PopulationState PopulationState::uniform(std::size_t agents, double initial_wealth,
                                         bool track_components) {
  PopulationState state;
  state.wealth.assign(agents, initial_wealth);
  if (track_components) {
    state.inherited.assign(agents, initial_wealth);
    state.savings.assign(agents, 0.0);
  }
  return state;
}

double PopulationState::total_wealth() const noexcept {
  return std::accumulate(wealth.begin(), wealth.end(), 0.0);
}

std::string_view to_string(ProcessKind kind) noexcept {
  switch (kind) {
    case ProcessKind::Compound: return "compound";
    case ProcessKind::Simple: return "simple";
    case ProcessKind::DecreasingCompound: return "decreasing";
    case ProcessKind::TwoFactorNoReinvest: return "two_factor";
    case ProcessKind::TwoFactorReinvest: return "two_factor_reinvest";
  }
  return "unknown";
}

ProcessKind parse_process_kind(std::string_view name) {
  for (auto kind : {ProcessKind::Compound, ProcessKind::Simple, ProcessKind::DecreasingCompound,
                    ProcessKind::TwoFactorNoReinvest, ProcessKind::TwoFactorReinvest}) {
    if (to_string(kind) == name) return kind;
  }
  throw ConfigError("unknown process '" + std::string(name) +
                    "' (expected compound, simple, decreasing, two_factor, two_factor_reinvest)");
}

bool is_two_factor(ProcessKind kind) noexcept {
  return kind == ProcessKind::TwoFactorNoReinvest || kind == ProcessKind::TwoFactorReinvest;
}

CumulativeReturnLedger CumulativeReturnLedger::start(std::span<const double> initial_wealth) {
  CumulativeReturnLedger ledger;
  ledger.initial_wealth.assign(initial_wealth.begin(), initial_wealth.end());
  ledger.return_sum.assign(initial_wealth.size(), 0.0);
  ledger.absorbed.assign(initial_wealth.size(), 0);
  for (std::size_t i = 0; i < initial_wealth.size(); ++i) {
    if (initial_wealth[i] <= 0.0) ledger.absorbed[i] = 1;
  }
  return ledger;
}

std::size_t step_compound(PopulationState& state, std::span<const double> returns) {
  check_length(state.size(), returns.size(), "step_compound");
  state.prev_wealth = state.wealth;
  std::size_t absorbed = 0;
  for (std::size_t i = 0; i < state.wealth.size(); ++i) {
    const double before = state.wealth[i];
    const double after = before * (1.0 + returns[i]);
    state.wealth[i] = after > 0.0 ? after : 0.0;
    if (before > 0.0 && state.wealth[i] == 0.0) ++absorbed;
  }
  ++state.t;
  return absorbed;
}

std::size_t step_simple(PopulationState& state, CumulativeReturnLedger& ledger,
                        std::span<const double> returns) {
  check_length(state.size(), returns.size(), "step_simple");
  check_length(state.size(), ledger.return_sum.size(), "step_simple ledger");
  state.prev_wealth = state.wealth;
  std::size_t absorbed = 0;
  for (std::size_t i = 0; i < state.wealth.size(); ++i) {
    if (ledger.absorbed[i]) {
      state.wealth[i] = 0.0;
      continue;
    }
    ledger.return_sum[i] += returns[i];
    const double w = ledger.initial_wealth[i] * (1.0 + ledger.return_sum[i]);
    if (w <= 0.0) {
      ledger.absorbed[i] = 1;
      state.wealth[i] = 0.0;
      ++absorbed;
    } else {
      state.wealth[i] = w;
    }
  }
  ++state.t;
  return absorbed;
}

std::string_view to_string(DecreasingForm form) noexcept {
  return form == DecreasingForm::Gross ? "gross" : "net";
}

DecreasingForm parse_decreasing_form(std::string_view name) {
  if (name == "gross") return DecreasingForm::Gross;
  if (name == "net") return DecreasingForm::Net;
  throw ConfigError("unknown decreasing_form '" + std::string(name) +
                    "' (expected gross or net)");
}

bool apply_decreasing_adjustment(std::span<double> returns, double total_wealth,
                                 DecreasingForm form) {
  if (!(total_wealth > 0.0)) {
    std::fill(returns.begin(), returns.end(), -1.0);
    return true;
  }
  const double divisor = std::log1p(total_wealth);
  for (double& r : returns) {
    if (form == DecreasingForm::Gross) {
      const double gross = (1.0 + r) / divisor;
      r = std::max(gross, 0.0) - 1.0;
    } else {
      r = std::max(r / divisor, -1.0);
    }
  }
  return false;
}

void step_two_factor(PopulationState& state, std::span<const double> returns,
                     std::span<const double> saving_rates, bool reinvest) {
  const std::size_t n = state.size();
  check_length(n, returns.size(), "step_two_factor returns");
  check_length(n, saving_rates.size(), "step_two_factor saving rates");
  if (!state.tracks_components()) {
    throw InternalError("step_two_factor requires the inherited/savings decomposition");
  }
  for (double s : saving_rates) {
    if (!(s >= 0.0 && s <= 1.0)) throw ConfigError("saving rate outside [0, 1]");
  }
  state.prev_wealth = state.wealth;
  const double y0 = state.labour_income;
  for (std::size_t i = 0; i < n; ++i) {
    const double growth = std::max(1.0 + returns[i], 0.0);
    state.inherited[i] *= growth;
    if (reinvest) state.savings[i] *= growth;
    state.savings[i] += saving_rates[i] * y0;
    state.wealth[i] = state.inherited[i] + state.savings[i];
  }
  ++state.t;
}

double fair_initial_wealth(double mean_saving, double mean_return, double labour_income) {
  if (!(mean_return > 0.0)) {
    throw ConfigError("fair initial wealth requires a positive mean return");
  }
  return mean_saving * labour_income / mean_return;
}

}  // namespace wealthsim

#include "wealthsim/fiscal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wealthsim/errors.hpp"

namespace wealthsim {

namespace {

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

std::string_view to_string(LevyMode mode) noexcept {
  return mode == LevyMode::Proportional ? "proportional" : "progressive";
}

std::string_view to_string(RedistributionMode mode) noexcept {
  return mode == RedistributionMode::UniformPublicService ? "public_service" : "welfare";
}

LevyMode parse_levy_mode(std::string_view name) {
  if (name == "proportional") return LevyMode::Proportional;
  if (name == "progressive") return LevyMode::Progressive;
  throw ConfigError("unknown levy '" + std::string(name) +
                    "' (expected proportional or progressive)");
}

RedistributionMode parse_redistribution_mode(std::string_view name) {
  if (name == "public_service") return RedistributionMode::UniformPublicService;
  if (name == "welfare") return RedistributionMode::RegressiveWelfare;
  throw ConfigError("unknown redistribution '" + std::string(name) +
                    "' (expected public_service or welfare)");
}

void validate(const TaxPolicy& policy) {
  if (!(policy.rate >= 0.0 && policy.rate <= 1.0)) {
    throw ConfigError("tax rate must lie in [0, 1]");
  }
}

std::vector<double> tax_base(const PopulationState& state) {
  if (state.prev_wealth.empty()) return {};
  if (state.prev_wealth.size() != state.wealth.size()) {
    throw InternalError("tax_base: prev_wealth length mismatch");
  }
  std::vector<double> base(state.wealth.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    base[i] = std::max(state.wealth[i] - state.prev_wealth[i], 0.0);
  }
  return base;
}

std::vector<double> levy_proportional(std::span<const double> base, double tau) {
  std::vector<double> tax(base.size());
  std::transform(base.begin(), base.end(), tax.begin(), [tau](double b) { return b * tau; });
  return tax;
}

std::vector<double> progressive_rates(std::span<const double> base, double tau_max) {
  std::vector<double> rates(base.size(), 0.0);
  if (base.empty()) return rates;
  const auto [lo, hi] = std::minmax_element(base.begin(), base.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) return rates;
  for (std::size_t i = 0; i < base.size(); ++i) {
    rates[i] = base[i] == *hi ? tau_max : tau_max * (base[i] - *lo) / range;
  }
  return rates;
}

std::vector<double> levy_progressive(std::span<const double> base, double tau_max) {
  std::vector<double> tax = progressive_rates(base, tau_max);
  for (std::size_t i = 0; i < tax.size(); ++i) tax[i] *= base[i];
  return tax;
}

std::vector<double> redistribute_uniform(std::span<const double> taxes) {
  if (taxes.empty()) return {};
  const double share = sum(taxes) / static_cast<double>(taxes.size());
  return std::vector<double>(taxes.size(), share);
}

std::vector<double> redistribute_regressive(std::span<const double> taxes,
                                            std::span<const double> base) {
  const std::size_t n = taxes.size();
  if (n < 2) throw ConfigError("regressive redistribution needs at least two agents");
  if (base.size() != n) throw InternalError("redistribute_regressive: length mismatch");
  std::vector<double> subsidy(n, 0.0);
  const double total_base = sum(base);
  if (!(total_base > 0.0)) return subsidy;
  const double pool = sum(taxes) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    subsidy[i] = std::max(1.0 - base[i] / total_base, 0.0) * pool;
  }
  return subsidy;
}

FiscalRecord apply_fiscal(PopulationState& state, const TaxPolicy& policy) {
  FiscalRecord record;
  record.base = tax_base(state);
  if (record.base.empty()) return record;
  record.applied = true;

  const std::size_t n = state.size();
  record.tax = policy.levy == LevyMode::Proportional
                   ? levy_proportional(record.base, policy.rate)
                   : levy_progressive(record.base, policy.rate);
  record.subsidy = policy.redistribution == RedistributionMode::UniformPublicService
                       ? redistribute_uniform(record.tax)
                       : redistribute_regressive(record.tax, record.base);

  record.total_base = sum(record.base);
  record.total_tax = sum(record.tax);
  record.total_subsidy = sum(record.subsidy);
  record.mean_tax_rate = record.total_base > 0.0 ? record.total_tax / record.total_base : 0.0;

  double rate_sum = 0.0;
  std::size_t rate_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (record.base[i] > 0.0) {
      rate_sum += record.tax[i] / record.base[i];
      ++rate_count;
    }
  }
  record.mean_individual_tax_rate = rate_count ? rate_sum / static_cast<double>(rate_count) : 0.0;

  // Diagnostics on the pre-fiscal ranking.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t half = n / 2;
  std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(half), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return state.wealth[a] < state.wealth[b] ||
                            (state.wealth[a] == state.wealth[b] && a < b);
                   });
  double bottom_wealth = 0.0;
  double top_levy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k < half) {
      bottom_wealth += state.wealth[order[k]];
    } else {
      top_levy += record.tax[order[k]];
    }
  }
  record.top50_levy_ratio = bottom_wealth > 0.0 ? top_levy / bottom_wealth : 0.0;

  double redistribution_sum = 0.0;
  std::size_t redistribution_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (state.wealth[i] > 0.0) {
      redistribution_sum += record.subsidy[i] / state.wealth[i];
      ++redistribution_count;
    }
  }
  record.mean_redistribution_rate =
      redistribution_count ? redistribution_sum / static_cast<double>(redistribution_count) : 0.0;

  for (std::size_t i = 0; i < n; ++i) {
    const double after = state.wealth[i] - record.tax[i] + record.subsidy[i];
    if (after < 0.0) throw InternalError("fiscal stage produced negative wealth");
    state.wealth[i] = after;
  }
  return record;
}

}  // namespace wealthsim

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wealthsim/dynamics.hpp"

namespace wealthsim {

enum class LevyMode { Proportional, Progressive };
enum class RedistributionMode { UniformPublicService, RegressiveWelfare };

/// One cell of the levy x redistribution table. `rate` is tau for the
/// proportional levy and tau_max for the progressive one.
struct TaxPolicy {
  LevyMode levy = LevyMode::Proportional;
  RedistributionMode redistribution = RedistributionMode::UniformPublicService;
  double rate = 0.05;

  friend bool operator==(const TaxPolicy&, const TaxPolicy&) = default;
};

std::string_view to_string(LevyMode mode) noexcept;
std::string_view to_string(RedistributionMode mode) noexcept;
LevyMode parse_levy_mode(std::string_view name);
RedistributionMode parse_redistribution_mode(std::string_view name);

/// Throws ConfigError unless 0 <= rate <= 1.
void validate(const TaxPolicy& policy);

/// Per-period fiscal diagnostics.
struct FiscalRecord {
  std::vector<double> base;
  std::vector<double> tax;
  std::vector<double> subsidy;
  double total_base = 0.0;
  double total_tax = 0.0;
  double total_subsidy = 0.0;
  /// Sum(tax) / Sum(base); 0 when the base is empty.
  double mean_tax_rate = 0.0;
  /// Mean of tax_i / base_i over agents with a positive base.
  double mean_individual_tax_rate = 0.0;
  /// Mean of subsidy_i / pre-fiscal wealth_i over agents with positive wealth.
  double mean_redistribution_rate = 0.0;
  /// Tax levied on the richest half over the wealth of the poorest half,
  /// ranked by pre-fiscal wealth.
  double top50_levy_ratio = 0.0;
  /// True when the stage ran; false on the first period (no previous wealth).
  bool applied = false;
};

/// max(W_t - W_{t-1}, 0) per agent. Empty when prev_wealth is not populated.
std::vector<double> tax_base(const PopulationState& state);

std::vector<double> levy_proportional(std::span<const double> base, double tau);

/// rate_i = tau_max (T_i - min T) / (max T - min T); all rates 0 when the base
/// has no spread.
std::vector<double> levy_progressive(std::span<const double> base, double tau_max);

/// Individual rates of the progressive levy (same rule as levy_progressive).
std::vector<double> progressive_rates(std::span<const double> base, double tau_max);

std::vector<double> redistribute_uniform(std::span<const double> taxes);

/// Subsidy_i = (1 - T_i / sum T) / (N - 1) * sum Tax; all zero when sum T = 0.
/// Throws ConfigError for N < 2.
std::vector<double> redistribute_regressive(std::span<const double> taxes,
                                            std::span<const double> base);

/// Levies and redistributes in place: W_i <- W_i - Tax_i + Subsidy_i.
/// Skipped (record.applied == false) while prev_wealth is empty.
FiscalRecord apply_fiscal(PopulationState& state, const TaxPolicy& policy);

}  // namespace wealthsim

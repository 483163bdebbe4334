#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wealthsim/dynamics.hpp"
#include "wealthsim/fiscal.hpp"
#include "wealthsim/returns.hpp"

namespace wealthsim {

enum class SavingPolicy { Uniform, None };

std::string_view to_string(SavingPolicy policy) noexcept;
SavingPolicy parse_saving_policy(std::string_view name);

/// One economic process with its return distribution and optional fiscal stage.
struct Scenario {
  std::string name = "baseline";
  ProcessKind process = ProcessKind::Compound;
  ReturnSpec returns = NormalReturns{};
  std::optional<TaxPolicy> tax;
  DecreasingForm decreasing_form = DecreasingForm::Net;
  SavingPolicy saving = SavingPolicy::Uniform;
  double labour_income = 1.0;
  /// Overrides the experiment's w0 with the fair-condition initial wealth.
  bool fair_initial_wealth = false;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct SweepGrid {
  std::vector<double> mu;
  std::vector<double> sigma;
  friend bool operator==(const SweepGrid&, const SweepGrid&) = default;
};

struct PersistenceSpec {
  std::vector<std::size_t> selections;
  std::size_t horizon = 1000;
  friend bool operator==(const PersistenceSpec&, const PersistenceSpec&) = default;
};

struct ExperimentConfig {
  std::vector<Scenario> scenarios{Scenario{}};
  std::size_t agents = 1000;
  std::size_t t_max = 2000;
  std::size_t replications = 20;
  std::uint64_t seed = 2019;
  double w0 = 10.0;
  std::size_t record_stride = 10;
  std::optional<SweepGrid> sweep;
  std::optional<PersistenceSpec> persistence;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;
  /// Also emit one timeseries row per replication.
  bool per_replication_rows = false;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Throws ConfigError describing the first violated constraint.
void validate(const ExperimentConfig& config);

/// Mean saving rate implied by a saving policy.
double mean_saving_rate(SavingPolicy policy) noexcept;

/// Initial wealth used by `scenario` under `config`.
double initial_wealth(const ExperimentConfig& config, const Scenario& scenario);

/// Built-in scenarios by name (baseline, gamma, simple, decreasing, ...).
/// Throws ConfigError for unknown names.
Scenario named_scenario(std::string_view name);
std::vector<std::string> scenario_names();

/// JSON (de)serialization. Parsing accepts either a bare config object or a
/// manifest that wraps one under "config"; scenarios may be given by name.
ExperimentConfig config_from_json(std::string_view text);
std::string config_to_json(const ExperimentConfig& config, int indent = 2);

ExperimentConfig load_config(const std::string& path_or_preset);

/// Built-in presets, keyed by file name (e.g. "paper.json").
std::vector<std::string> preset_names();
std::optional<ExperimentConfig> preset(std::string_view name);

}  // namespace wealthsim

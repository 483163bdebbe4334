#include "wealthsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "wealthsim/errors.hpp"
#include "wealthsim/version.hpp"

namespace wealthsim {

using nlohmann::json;

std::string_view to_string(SavingPolicy policy) noexcept {
  return policy == SavingPolicy::Uniform ? "uniform" : "none";
}

SavingPolicy parse_saving_policy(std::string_view name) {
  if (name == "uniform") return SavingPolicy::Uniform;
  if (name == "none") return SavingPolicy::None;
  throw ConfigError("unknown saving policy '" + std::string(name) + "' (expected uniform or none)");
}

double mean_saving_rate(SavingPolicy policy) noexcept {
  return policy == SavingPolicy::Uniform ? 0.5 : 0.0;
}

double initial_wealth(const ExperimentConfig& config, const Scenario& scenario) {
  if (!scenario.fair_initial_wealth) return config.w0;
  return fair_initial_wealth(mean_saving_rate(scenario.saving), analytic_mean(scenario.returns),
                             scenario.labour_income);
}

void validate(const ExperimentConfig& config) {
  if (config.agents < 10) throw ConfigError("n must be at least 10");
  if (config.t_max < 2) throw ConfigError("t_max must be at least 2");
  if (config.replications < 1) throw ConfigError("replications must be at least 1");
  if (!(config.w0 > 0.0) || !std::isfinite(config.w0)) throw ConfigError("w0 must be positive");
  if (config.record_stride < 1) throw ConfigError("record_stride must be at least 1");
  if (config.scenarios.empty()) throw ConfigError("at least one scenario is required");

  std::set<std::string> names;
  for (const auto& s : config.scenarios) {
    if (s.name.empty()) throw ConfigError("scenario name must not be empty");
    if (!names.insert(s.name).second) throw ConfigError("duplicate scenario name '" + s.name + "'");
    validate(s.returns);
    if (!(s.labour_income >= 0.0) || !std::isfinite(s.labour_income)) {
      throw ConfigError("scenario '" + s.name + "': labour_income must be >= 0");
    }
    if (s.tax) {
      validate(*s.tax);
      if (s.process != ProcessKind::Compound && s.process != ProcessKind::DecreasingCompound) {
        throw ConfigError("scenario '" + s.name +
                          "': taxation is supported for the compound and decreasing processes");
      }
    }
    if (s.fair_initial_wealth) {
      if (!is_two_factor(s.process)) {
        throw ConfigError("scenario '" + s.name +
                          "': fair_initial_wealth applies to two-factor processes only");
      }
      if (s.saving == SavingPolicy::None) {
        throw ConfigError("scenario '" + s.name + "': fair_initial_wealth needs saved income");
      }
      const double w = initial_wealth(config, s);
      if (!(w > 0.0)) throw ConfigError("scenario '" + s.name + "': fair initial wealth is not positive");
    }
  }

  if (config.sweep) {
    if (config.sweep->mu.empty() || config.sweep->sigma.empty()) {
      throw ConfigError("sweep grids must be nonempty");
    }
    for (double s : config.sweep->sigma) {
      if (!(s > 0.0)) throw ConfigError("sweep sigma values must be positive");
    }
    for (double m : config.sweep->mu) {
      if (!std::isfinite(m)) throw ConfigError("sweep mu values must be finite");
    }
  }
  if (config.persistence) {
    if (config.persistence->selections.empty()) {
      throw ConfigError("persistence needs at least one selection period");
    }
    if (config.persistence->horizon < 1) throw ConfigError("persistence horizon must be positive");
    for (std::size_t t_sel : config.persistence->selections) {
      if (t_sel + config.persistence->horizon > config.t_max) {
        throw ConfigError("persistence selection " + std::to_string(t_sel) + " + horizon " +
                          std::to_string(config.persistence->horizon) + " exceeds t_max " +
                          std::to_string(config.t_max));
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Scenario catalog

namespace {

Scenario make(std::string name, ProcessKind process, ReturnSpec returns) {
  Scenario s;
  s.name = std::move(name);
  s.process = process;
  s.returns = returns;
  return s;
}

Scenario taxed(std::string name, LevyMode levy, RedistributionMode redistribution, double rate) {
  Scenario s = make(std::move(name), ProcessKind::Compound, NormalReturns{});
  s.tax = TaxPolicy{levy, redistribution, rate};
  return s;
}

std::vector<Scenario> catalog() {
  const ReturnSpec normal = NormalReturns{0.05, 0.05};
  const ReturnSpec gamma = GammaReturns{0.25, 0.2};
  const ReturnSpec constant = ConstantReturn{0.05};
  std::vector<Scenario> out;
  out.push_back(make("baseline", ProcessKind::Compound, normal));
  out.push_back(make("compound", ProcessKind::Compound, normal));
  out.push_back(make("gamma", ProcessKind::Compound, gamma));
  out.push_back(make("constant", ProcessKind::Compound, constant));
  out.push_back(make("simple", ProcessKind::Simple, normal));
  out.push_back(make("simple_gamma", ProcessKind::Simple, gamma));
  out.push_back(make("simple_constant", ProcessKind::Simple, constant));
  out.push_back(make("decreasing", ProcessKind::DecreasingCompound, normal));
  {
    Scenario s = make("decreasing_gross", ProcessKind::DecreasingCompound, normal);
    s.decreasing_form = DecreasingForm::Gross;
    out.push_back(s);
  }
  {
    Scenario s = make("two_factor", ProcessKind::TwoFactorNoReinvest, normal);
    s.fair_initial_wealth = true;
    out.push_back(s);
  }
  {
    Scenario s = make("two_factor_reinvest", ProcessKind::TwoFactorReinvest, normal);
    s.fair_initial_wealth = true;
    out.push_back(s);
  }
  {
    Scenario s = make("two_factor_nosave", ProcessKind::TwoFactorNoReinvest, normal);
    s.saving = SavingPolicy::None;
    out.push_back(s);
  }
  out.push_back(taxed("prop_ps", LevyMode::Proportional, RedistributionMode::UniformPublicService, 0.05));
  out.push_back(taxed("prop_welfare", LevyMode::Proportional, RedistributionMode::RegressiveWelfare, 0.05));
  out.push_back(taxed("prog_ps", LevyMode::Progressive, RedistributionMode::UniformPublicService, 0.10));
  out.push_back(taxed("prog_welfare", LevyMode::Progressive, RedistributionMode::RegressiveWelfare, 0.10));
  return out;
}

}  // namespace

Scenario named_scenario(std::string_view name) {
  for (auto& s : catalog()) {
    if (s.name == name) return s;
  }
  std::string known;
  for (const auto& n : scenario_names()) known += (known.empty() ? "" : ", ") + n;
  throw ConfigError("unknown scenario '" + std::string(name) + "' (known: " + known + ")");
}

std::vector<std::string> scenario_names() {
  std::vector<std::string> names;
  for (const auto& s : catalog()) names.push_back(s.name);
  return names;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return it.key() == k; })) {
      throw ConfigError(std::string("unknown field '") + it.key() + "' in " + where);
    }
  }
}

json returns_to_json(const ReturnSpec& spec) {
  if (const auto* n = std::get_if<NormalReturns>(&spec)) {
    return {{"dist", "normal"}, {"mu", n->mu}, {"sigma", n->sigma}};
  }
  if (const auto* g = std::get_if<GammaReturns>(&spec)) {
    return {{"dist", "gamma"}, {"shape", g->shape}, {"scale", g->scale}};
  }
  return {{"dist", "constant"}, {"rate", std::get<ConstantReturn>(spec).rate}};
}

ReturnSpec returns_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("'returns' must be an object");
  const auto dist = get_or<std::string>(j, "dist", "normal");
  if (dist == "normal") {
    reject_unknown(j, {"dist", "mu", "sigma"}, "normal returns");
    return NormalReturns{get_or(j, "mu", 0.05), get_or(j, "sigma", 0.05)};
  }
  if (dist == "gamma") {
    reject_unknown(j, {"dist", "shape", "scale"}, "gamma returns");
    return GammaReturns{get_or(j, "shape", 0.25), get_or(j, "scale", 0.2)};
  }
  if (dist == "constant") {
    reject_unknown(j, {"dist", "rate"}, "constant returns");
    return ConstantReturn{get_or(j, "rate", 0.05)};
  }
  throw ConfigError("unknown return distribution '" + dist + "' (expected normal, gamma, constant)");
}

json tax_to_json(const TaxPolicy& tax) {
  json j = {{"levy", std::string(to_string(tax.levy))},
            {"redistribution", std::string(to_string(tax.redistribution))}};
  j[tax.levy == LevyMode::Proportional ? "tau" : "tau_max"] = tax.rate;
  return j;
}

TaxPolicy tax_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("'tax' must be an object");
  reject_unknown(j, {"levy", "redistribution", "tau", "tau_max"}, "tax");
  TaxPolicy tax;
  tax.levy = parse_levy_mode(get_or<std::string>(j, "levy", "proportional"));
  tax.redistribution =
      parse_redistribution_mode(get_or<std::string>(j, "redistribution", "public_service"));
  tax.rate = tax.levy == LevyMode::Proportional ? get_or(j, "tau", 0.05) : get_or(j, "tau_max", 0.10);
  return tax;
}

json scenario_to_json(const Scenario& s) {
  json j = {{"name", s.name},
            {"process", std::string(to_string(s.process))},
            {"returns", returns_to_json(s.returns)},
            {"decreasing_form", std::string(to_string(s.decreasing_form))},
            {"log_base", "e"},
            {"saving", std::string(to_string(s.saving))},
            {"labour_income", s.labour_income},
            {"fair_initial_wealth", s.fair_initial_wealth}};
  j["tax"] = s.tax ? tax_to_json(*s.tax) : json(nullptr);
  return j;
}

Scenario scenario_from_json(const json& j) {
  if (j.is_string()) return named_scenario(j.get<std::string>());
  if (!j.is_object()) throw ConfigError("scenario must be a name or an object");
  reject_unknown(j,
                 {"name", "base", "process", "returns", "decreasing_form", "log_base", "saving",
                  "labour_income", "fair_initial_wealth", "tax"},
                 "scenario");
  Scenario s;
  if (j.contains("base")) s = named_scenario(j.at("base").get<std::string>());
  s.name = get_or<std::string>(j, "name", s.name);
  if (j.contains("process")) s.process = parse_process_kind(j.at("process").get<std::string>());
  if (j.contains("returns")) s.returns = returns_from_json(j.at("returns"));
  if (j.contains("decreasing_form")) {
    s.decreasing_form = parse_decreasing_form(j.at("decreasing_form").get<std::string>());
  }
  if (get_or<std::string>(j, "log_base", "e") != "e") {
    throw ConfigError("only the natural logarithm (log_base \"e\") is supported");
  }
  if (j.contains("saving")) s.saving = parse_saving_policy(j.at("saving").get<std::string>());
  s.labour_income = get_or(j, "labour_income", s.labour_income);
  s.fair_initial_wealth = get_or(j, "fair_initial_wealth", s.fair_initial_wealth);
  if (j.contains("tax")) {
    if (j.at("tax").is_null()) {
      s.tax.reset();
    } else {
      s.tax = tax_from_json(j.at("tax"));
    }
  }
  return s;
}

json config_to_json_value(const ExperimentConfig& c) {
  json scenarios = json::array();
  for (const auto& s : c.scenarios) scenarios.push_back(scenario_to_json(s));
  json j = {{"n", c.agents},
            {"t_max", c.t_max},
            {"replications", c.replications},
            {"seed", c.seed},
            {"w0", c.w0},
            {"record_stride", c.record_stride},
            {"threads", c.threads},
            {"per_replication_rows", c.per_replication_rows},
            {"scenarios", scenarios}};
  j["sweep"] = c.sweep ? json{{"mu", c.sweep->mu}, {"sigma", c.sweep->sigma}} : json(nullptr);
  j["persistence"] = c.persistence ? json{{"selections", c.persistence->selections},
                                          {"horizon", c.persistence->horizon}}
                                   : json(nullptr);
  return j;
}

ExperimentConfig config_from_json_value(const json& root) {
  const json& j = root.contains("config") ? root.at("config") : root;
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j,
                 {"n", "t_max", "replications", "seed", "w0", "record_stride", "threads",
                  "per_replication_rows", "scenario", "scenarios", "sweep", "persistence"},
                 "config");
  ExperimentConfig c;
  c.agents = get_or(j, "n", c.agents);
  c.t_max = get_or(j, "t_max", c.t_max);
  c.replications = get_or(j, "replications", c.replications);
  c.seed = get_or(j, "seed", c.seed);
  c.w0 = get_or(j, "w0", c.w0);
  c.record_stride = get_or(j, "record_stride", c.record_stride);
  c.threads = get_or(j, "threads", c.threads);
  c.per_replication_rows = get_or(j, "per_replication_rows", c.per_replication_rows);
  if (j.contains("scenario") && j.contains("scenarios")) {
    throw ConfigError("give either 'scenario' or 'scenarios', not both");
  }
  if (j.contains("scenario")) {
    c.scenarios = {scenario_from_json(j.at("scenario"))};
  } else if (j.contains("scenarios")) {
    if (!j.at("scenarios").is_array()) throw ConfigError("'scenarios' must be an array");
    c.scenarios.clear();
    for (const auto& s : j.at("scenarios")) c.scenarios.push_back(scenario_from_json(s));
  }
  if (j.contains("sweep") && !j.at("sweep").is_null()) {
    const auto& s = j.at("sweep");
    reject_unknown(s, {"mu", "sigma"}, "sweep");
    c.sweep = SweepGrid{get_or(s, "mu", std::vector<double>{}), get_or(s, "sigma", std::vector<double>{})};
  }
  if (j.contains("persistence") && !j.at("persistence").is_null()) {
    const auto& p = j.at("persistence");
    reject_unknown(p, {"selections", "horizon"}, "persistence");
    c.persistence = PersistenceSpec{get_or(p, "selections", std::vector<std::size_t>{}),
                                    get_or(p, "horizon", std::size_t{1000})};
  }
  return c;
}

}  // namespace

ExperimentConfig config_from_json(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  try {
    return config_from_json_value(root);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
}

std::string config_to_json(const ExperimentConfig& config, int indent) {
  return config_to_json_value(config).dump(indent);
}

ExperimentConfig load_config(const std::string& path_or_preset) {
  std::ifstream in(path_or_preset);
  if (!in) {
    if (auto p = preset(path_or_preset)) return *p;
    throw ConfigError("cannot open config '" + path_or_preset + "' (not a file or built-in preset)");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return config_from_json(buffer.str());
}

// ---------------------------------------------------------------------------
// Presets

namespace {

std::vector<double> full_grid() { return {0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08}; }

std::vector<std::pair<std::string, ExperimentConfig>> presets() {
  std::vector<std::pair<std::string, ExperimentConfig>> out;
  auto scenarios = [](std::initializer_list<const char*> names) {
    std::vector<Scenario> v;
    for (const char* n : names) v.push_back(named_scenario(n));
    return v;
  };

  ExperimentConfig smoke;
  smoke.agents = 100;
  smoke.t_max = 200;
  smoke.replications = 2;
  smoke.scenarios = scenarios({"baseline"});
  out.emplace_back("smoke.json", smoke);

  ExperimentConfig desk;
  desk.scenarios = scenarios({"baseline", "gamma"});
  out.emplace_back("desk.json", desk);

  ExperimentConfig desk_sweep = desk;
  desk_sweep.scenarios = scenarios({"baseline"});
  desk_sweep.sweep = SweepGrid{{0.02, 0.04, 0.06, 0.08}, {0.02, 0.04, 0.06, 0.08}};
  out.emplace_back("desk_sweep.json", desk_sweep);

  ExperimentConfig desk_persistence = desk;
  desk_persistence.scenarios = scenarios({"baseline"});
  desk_persistence.agents = 2000;
  desk_persistence.t_max = 2500;
  desk_persistence.persistence = PersistenceSpec{{10, 500, 1500}, 1000};
  out.emplace_back("desk_persistence.json", desk_persistence);

  ExperimentConfig full;
  full.agents = 5000;
  full.t_max = 5000;
  full.replications = 100;
  full.scenarios = scenarios({"baseline", "gamma"});
  full.sweep = SweepGrid{full_grid(), full_grid()};
  out.emplace_back("paper.json", full);

  ExperimentConfig paper_accumulation = full;
  paper_accumulation.sweep.reset();
  paper_accumulation.scenarios =
      scenarios({"baseline", "decreasing", "simple", "simple_gamma", "two_factor",
                 "two_factor_reinvest"});
  out.emplace_back("paper_accumulation.json", paper_accumulation);

  ExperimentConfig paper_taxation = full;
  paper_taxation.sweep.reset();
  paper_taxation.scenarios =
      scenarios({"baseline", "prop_ps", "prop_welfare", "prog_ps", "prog_welfare"});
  out.emplace_back("paper_taxation.json", paper_taxation);

  ExperimentConfig paper_persistence = full;
  paper_persistence.sweep.reset();
  paper_persistence.agents = 20000;
  paper_persistence.replications = 1;
  paper_persistence.scenarios = scenarios({"baseline"});
  paper_persistence.persistence = PersistenceSpec{{10, 100, 1000, 2000, 3000, 4000}, 1000};
  out.emplace_back("paper_persistence.json", paper_persistence);
  return out;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, cfg] : presets()) names.push_back(name);
  return names;
}

std::optional<ExperimentConfig> preset(std::string_view name) {
  for (auto& [n, cfg] : presets()) {
    if (n == name) return cfg;
  }
  return std::nullopt;
}

}  // namespace wealthsim

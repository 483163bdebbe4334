// wealthsim: command-line front end for the wealth accumulation simulator.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wealthsim/config.hpp"
#include "wealthsim/errors.hpp"
#include "wealthsim/harness.hpp"
#include "wealthsim/output.hpp"

namespace {

using namespace wealthsim;

struct CommonOptions {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> agents;
  std::optional<std::size_t> t_max;
  std::optional<std::size_t> reps;
  std::optional<double> w0;
  std::optional<std::size_t> record_stride;
  std::optional<unsigned> threads;
  std::vector<std::string> scenarios;
  std::vector<double> mu;
  std::vector<double> sigma;
  std::vector<std::size_t> selections;
  std::optional<std::size_t> horizon;
  bool per_replication = false;
  bool quiet = false;
};

void add_common(CLI::App& cmd, CommonOptions& o) {
  cmd.add_option("--config", o.config, "Config JSON file or built-in preset name");
  cmd.add_option("--out", o.out, "Output directory")->capture_default_str();
  cmd.add_option("--seed", o.seed, "Base seed shared by every scenario");
  cmd.add_option("--n", o.agents, "Number of agents");
  cmd.add_option("--t-max", o.t_max, "Number of periods");
  cmd.add_option("--reps", o.reps, "Replications per scenario");
  cmd.add_option("--w0", o.w0, "Initial wealth of every agent");
  cmd.add_option("--record-stride", o.record_stride, "Periods between metric snapshots");
  cmd.add_option("--threads", o.threads, "Worker threads (0 = auto)");
  cmd.add_option("--scenario", o.scenarios, "Named scenario (repeatable)");
  cmd.add_option("--mu", o.mu, "Sweep grid for mu (space separated)");
  cmd.add_option("--sigma", o.sigma, "Sweep grid for sigma (space separated)");
  cmd.add_option("--selections", o.selections, "Persistence selection periods");
  cmd.add_option("--horizon", o.horizon, "Persistence horizon in periods");
  cmd.add_flag("--per-replication", o.per_replication, "Also write per-replication rows");
  cmd.add_flag("--quiet", o.quiet, "Suppress progress output");
}

ExperimentConfig resolve(const CommonOptions& o) {
  ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  if (o.agents) cfg.agents = *o.agents;
  if (o.t_max) cfg.t_max = *o.t_max;
  if (o.reps) cfg.replications = *o.reps;
  if (o.w0) cfg.w0 = *o.w0;
  if (o.record_stride) cfg.record_stride = *o.record_stride;
  if (o.threads) cfg.threads = *o.threads;
  if (o.per_replication) cfg.per_replication_rows = true;
  if (!o.scenarios.empty()) {
    cfg.scenarios.clear();
    for (const auto& name : o.scenarios) cfg.scenarios.push_back(named_scenario(name));
  }
  if (!o.mu.empty() || !o.sigma.empty()) {
    SweepGrid grid = cfg.sweep.value_or(SweepGrid{});
    if (!o.mu.empty()) grid.mu = o.mu;
    if (!o.sigma.empty()) grid.sigma = o.sigma;
    cfg.sweep = grid;
  }
  if (!o.selections.empty() || o.horizon) {
    PersistenceSpec spec = cfg.persistence.value_or(PersistenceSpec{});
    if (!o.selections.empty()) spec.selections = o.selections;
    if (o.horizon) spec.horizon = *o.horizon;
    cfg.persistence = spec;
  }
  validate(cfg);
  return cfg;
}

void log(const CommonOptions& o, const std::string& message) {
  if (!o.quiet) std::cerr << "wealthsim: " << message << '\n';
}

int execute(const std::string& command, const CommonOptions& o) {
  const auto start = std::chrono::steady_clock::now();
  OutputBundle bundle;
  bundle.command = command;
  bundle.config = resolve(o);
  const auto& cfg = bundle.config;

  if (command == "run" || command == "compare") {
    log(o, command + ": " + std::to_string(cfg.scenarios.size()) + " scenario(s), N=" +
               std::to_string(cfg.agents) + ", t_max=" + std::to_string(cfg.t_max) +
               ", replications=" + std::to_string(cfg.replications) +
               ", seed=" + std::to_string(cfg.seed));
    bundle.scenarios = run_scenarios(cfg);
  } else if (command == "sweep") {
    if (!cfg.sweep) throw ConfigError("sweep needs grids (--mu/--sigma or a 'sweep' block)");
    log(o, "sweep: " + std::to_string(cfg.sweep->mu.size()) + "x" +
               std::to_string(cfg.sweep->sigma.size()) + " cells");
    bundle.sweep = run_sweep(cfg);
  } else if (command == "persistence") {
    if (!cfg.persistence) {
      throw ConfigError("persistence needs --selections or a 'persistence' block");
    }
    log(o, "persistence: N=" + std::to_string(cfg.agents) + ", " +
               std::to_string(cfg.persistence->selections.size()) + " selection period(s)");
    bundle.persistence = run_persistence(cfg);
    bundle.scenarios.push_back(bundle.persistence->ensemble);
  }

  for (const auto& r : bundle.scenarios) {
    if (r.absorption_events > 0) {
      log(o, "scenario '" + r.scenario.name + "': " + std::to_string(r.absorption_events) +
                 " agent(s) absorbed at zero wealth");
    }
    if (r.degenerate_periods > 0) {
      log(o, "scenario '" + r.scenario.name + "': " + std::to_string(r.degenerate_periods) +
                 " degenerate period(s) with non-positive total wealth");
    }
  }
  write_outputs(bundle, o.out);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  log(o, "wrote " + o.out + " in " + std::to_string(seconds) + " s");
  return 0;
}

int list_presets(const std::string& show, const std::string& write_dir) {
  if (!show.empty()) {
    auto p = preset(show);
    if (!p) throw ConfigError("unknown preset '" + show + "'");
    std::cout << config_to_json(*p) << '\n';
    return 0;
  }
  if (!write_dir.empty()) {
    std::filesystem::create_directories(write_dir);
    for (const auto& name : preset_names()) {
      std::ofstream out(std::filesystem::path(write_dir) / name);
      if (!out) throw IoError("cannot write preset into '" + write_dir + "'");
      out << config_to_json(*preset(name)) << '\n';
    }
    return 0;
  }
  for (const auto& name : preset_names()) {
    const auto p = *preset(name);
    std::cout << name << "  N=" << p.agents << " t_max=" << p.t_max << " reps=" << p.replications
              << " scenarios=" << p.scenarios.size() << (p.sweep ? " +sweep" : "")
              << (p.persistence ? " +persistence" : "") << '\n';
  }
  std::cout << "\nscenarios:";
  for (const auto& name : scenario_names()) std::cout << ' ' << name;
  std::cout << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wealth accumulation, inequality and mobility simulator"};
  app.require_subcommand(1, 1);

  CommonOptions opts;
  std::string show_preset;
  std::string write_presets;
  std::vector<std::pair<std::string, CLI::App*>> sims;
  const std::pair<const char*, const char*> commands[] = {
      {"run", "Run the configured scenarios"},
      {"sweep", "Sweep the mu x sigma grid"},
      {"persistence", "Rank persistence of the top percentile"},
      {"compare", "Run named scenarios under one base seed"},
  };
  for (const auto& [name, description] : commands) {
    CLI::App* cmd = app.add_subcommand(name, description);
    add_common(*cmd, opts);
    sims.emplace_back(name, cmd);
  }
  auto* presets_cmd = app.add_subcommand("presets", "List built-in configs");
  presets_cmd->add_option("--show", show_preset, "Print one preset as JSON");
  presets_cmd->add_option("--write", write_presets, "Write every preset into a directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (presets_cmd->parsed()) return list_presets(show_preset, write_presets);
    for (const auto& [name, cmd] : sims) {
      if (cmd->parsed()) return execute(name, opts);
    }
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

#include "wealthsim/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "json.hpp"
#include "wealthsim/errors.hpp"
#include "wealthsim/rng.hpp"
#include "wealthsim/version.hpp"

namespace wealthsim {

std::string format_number(double value) {
  if (std::isnan(value)) return {};
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw InternalError("number formatting failed");
  return std::string(buf, end);
}

namespace {

class CsvRow {
 public:
  explicit CsvRow(std::ostringstream& os) : os_(os) {}
  ~CsvRow() { os_ << '\n'; }
  CsvRow& operator<<(const std::string& s) {
    sep();
    os_ << s;
    return *this;
  }
  CsvRow& operator<<(std::size_t v) {
    sep();
    os_ << v;
    return *this;
  }
  CsvRow& operator<<(double v) {
    sep();
    os_ << format_number(v);
    return *this;
  }

 private:
  void sep() {
    if (!first_) os_ << ',';
    first_ = false;
  }
  std::ostringstream& os_;
  bool first_ = true;
};

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void timeseries_row(std::ostringstream& os, const std::string& id, const std::string& rep,
                    const EnsembleRow& row) {
  CsvRow(os) << id << rep << row.t << row.gini.mean << row.gini.std << row.mobility.mean
             << row.mobility.std << row.theil.mean << row.top1.mean << row.growth.mean
             << row.total_wealth.mean << row.mean_tax_rate.mean << row.mean_redistribution_rate.mean
             << row.top50_levy_ratio.mean;
}

void diagnostics_row(std::ostringstream& os, const std::string& id, const std::string& rep,
                     const EnsembleRow& row) {
  CsvRow(os) << id << rep << row.t << row.mean_individual_tax_rate.mean << row.savings_share.mean
             << row.savings_share.std << row.theil.std << row.top1.std << row.total_wealth.std
             << row.mean_tax_rate.std << row.growth.std;
}

/// A single replication viewed as a one-member ensemble.
EnsembleResult as_ensemble(const Scenario& scenario, const ReplicationResult& rep) {
  return merge_replications(scenario, {rep}, false);
}

}  // namespace

std::string timeseries_csv(const std::vector<EnsembleResult>& results) {
  std::ostringstream os;
  os << kTimeseriesHeader << '\n';
  for (const auto& r : results) {
    for (const auto& row : r.rows) timeseries_row(os, r.scenario.name, "ensemble", row);
    for (const auto& rep : r.per_replication) {
      const auto single = as_ensemble(r.scenario, rep);
      for (auto row : single.rows) {
        row.gini.std = row.mobility.std = kMissing;
        timeseries_row(os, r.scenario.name, std::to_string(rep.replication), row);
      }
    }
  }
  return os.str();
}

std::string diagnostics_csv(const std::vector<EnsembleResult>& results) {
  std::ostringstream os;
  os << kDiagnosticsHeader << '\n';
  for (const auto& r : results) {
    for (const auto& row : r.rows) diagnostics_row(os, r.scenario.name, "ensemble", row);
  }
  return os.str();
}

std::string sweep_csv(const std::optional<SweepResult>& sweep) {
  std::ostringstream os;
  os << kSweepHeader << '\n';
  if (sweep) {
    for (const auto& c : sweep->cells) CsvRow(os) << c.mu << c.sigma << c.gini_final << c.mobility_final;
  }
  return os.str();
}

std::string persistence_csv(const std::optional<PersistenceResult>& persistence) {
  std::ostringstream os;
  os << kPersistenceHeader << '\n';
  if (persistence) {
    for (const auto& c : persistence->cohorts) {
      for (std::size_t rep = 0; rep < c.agents.size(); ++rep) {
        for (std::size_t k = 0; k < c.agents[rep].size(); ++k) {
          CsvRow(os) << c.t_sel << rep << c.agents[rep][k] << c.avg_norm_rank[rep][k];
        }
      }
    }
  }
  return os.str();
}

std::string persistence_trajectory_csv(const std::optional<PersistenceResult>& persistence) {
  std::ostringstream os;
  os << kPersistenceTrajectoryHeader << '\n';
  if (persistence) {
    for (const auto& c : persistence->cohorts) {
      for (std::size_t d = 0; d < c.mean_norm_rank.size(); ++d) {
        CsvRow(os) << c.t_sel << (d + 1) << c.mean_norm_rank[d];
      }
    }
  }
  return os.str();
}

std::string manifest_json(const OutputBundle& bundle) {
  nlohmann::json manifest;
  manifest["tool"] = "wealthsim";
  manifest["code_version"] = std::string(kVersion);
  manifest["command"] = bundle.command;
  manifest["rng_algorithm"] = std::string(kRngAlgorithm);
  manifest["seed"] = bundle.config.seed;
  manifest["config"] = nlohmann::json::parse(config_to_json(bundle.config, -1));
  nlohmann::json diag = nlohmann::json::object();
  for (const auto& r : bundle.scenarios) {
    diag[r.scenario.name] = {{"absorption_events", r.absorption_events},
                             {"degenerate_periods", r.degenerate_periods},
                             {"max_conservation_error", r.max_conservation_error}};
  }
  manifest["diagnostics"] = diag;
  return manifest.dump(2) + "\n";
}

void write_outputs(const OutputBundle& bundle, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw IoError("cannot create output directory '" + out_dir.string() + "'" +
                  (ec ? ": " + ec.message() : std::string()));
  }
  write_file(out_dir / "timeseries.csv", timeseries_csv(bundle.scenarios));
  write_file(out_dir / "diagnostics.csv", diagnostics_csv(bundle.scenarios));
  write_file(out_dir / "sweep.csv", sweep_csv(bundle.sweep));
  write_file(out_dir / "persistence.csv", persistence_csv(bundle.persistence));
  write_file(out_dir / "persistence_trajectory.csv", persistence_trajectory_csv(bundle.persistence));
  write_file(out_dir / "manifest.json", manifest_json(bundle));
}

}  // namespace wealthsim

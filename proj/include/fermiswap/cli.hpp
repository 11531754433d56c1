#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fermiswap/budget.hpp"
#include "fermiswap/gate.hpp"

namespace fermiswap::cli {

/// Schema violation; `path` locates the offending field, e.g. "chain.N".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalFailure = 3 };

struct PacketConfig {
  double center_over_N = 0.25;
  double carrier = kPi / 2;  // rad/site, replaced by the storage result when geometry is given
  std::optional<StorageGeometry> storage;
};

struct SweepAxes {
  std::optional<std::vector<double>> V_over_2J;
  std::optional<std::vector<int>> N;
  std::optional<std::vector<double>> sigma_over_N;
};

/// Parsed configuration. Frequencies arrive in Hz and are stored here in rad/s.
struct RunConfig {
  ChainSpec chain;
  SpinCouplings couplings{kTwoPi, 0.0};
  std::optional<HubbardParams> hubbard;  // when set, couplings are derived from it

  double sigma_over_N = 0.1;
  PacketConfig R{0.25, kPi / 2, std::nullopt};
  PacketConfig L{0.75, -kPi / 2, std::nullopt};

  double tau_over_T = 1.0;
  std::optional<double> tau_s;
  std::optional<double> tau_J;  // dimensionless tau * J

  PropagationOptions propagation;
  ExperimentParams experiment;
  SweepAxes sweep;

  std::string out_dir = "out";
  bool record_timing = false;
  int threads = 1;
};

/// Validates against the schema (unknown keys rejected) and fills defaults.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config_file(const std::string& path);

/// Canonical form with every default filled in; parse_config(echo_config(c)) reproduces c.
nlohmann::json echo_config(const RunConfig& config);

/// Gate spec for the base point, or for a sweep point when overrides are given.
GateRunSpec gate_spec(const RunConfig& config, std::optional<int> N = std::nullopt,
                      std::optional<double> sigma_over_N = std::nullopt,
                      std::optional<double> V_over_2J = std::nullopt);

nlohmann::json report_json(const GateReport& report, bool record_timing);
std::string gate_csv_header();
std::string gate_csv_row(const GateReport& report, bool record_timing);
nlohmann::json budget_json(const BudgetReport& report);
std::string budget_table(const BudgetReport& report, const ExperimentParams& params);

/// 17 significant digits; NaN written as "nan".
std::string format_double(double x);

struct CommandOptions {
  bool json = false;
  bool inject_fault = false;  // selfcheck negative control
};

int cmd_gate_run(const RunConfig& config, const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_budget(const RunConfig& config, const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_selfcheck(const CommandOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace fermiswap::cli

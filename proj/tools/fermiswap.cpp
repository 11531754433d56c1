// Command-line front end: gate-run, sweep, budget, selfcheck.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fermiswap/cli.hpp"

namespace {

struct RunFlags {
  std::string config_path;
  std::string out_dir;
  bool echo = false;
  bool json = false;
  double tol = 0.0;
  int threads = 0;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON configuration file");
  cmd->add_option("--out", f.out_dir, "output directory (overrides output.dir)");
  cmd->add_flag("--echo-config", f.echo, "print the canonical configuration with defaults filled, then exit");
  cmd->add_flag("--json", f.json, "machine-readable output on stdout");
  cmd->add_option("--tol", f.tol, "propagation tolerance (overrides propagation.tol)");
  cmd->add_option("--threads", f.threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
}

int run(const RunFlags& f, int (*command)(const fermiswap::cli::RunConfig&, const fermiswap::cli::CommandOptions&,
                                          std::ostream&, std::ostream&)) {
  using namespace fermiswap::cli;
  nlohmann::json doc = nlohmann::json::object();
  RunConfig config;
  try {
    config = f.config_path.empty() ? parse_config(doc) : parse_config_file(f.config_path);
    if (!f.out_dir.empty()) config.out_dir = f.out_dir;
    if (f.tol != 0.0) {
      if (!(f.tol >= 1e-14 && f.tol <= 1e-6)) throw ConfigError("--tol", "must lie in [1e-14, 1e-6]");
      config.propagation.tol = f.tol;
    }
    if (f.threads > 0) config.threads = f.threads;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  if (f.echo) {
    std::cout << echo_config(config).dump(2) << '\n';
    return kOk;
  }
  CommandOptions opts;
  opts.json = f.json;
  return command(config, opts, std::cout, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin-chain photonic phase gate simulator"};
  app.require_subcommand(1);

  RunFlags gate_flags, sweep_flags, budget_flags;
  auto* gate = app.add_subcommand("gate-run", "simulate one gate run and extract the nonlinear phase");
  add_run_flags(gate, gate_flags);
  auto* sweep = app.add_subcommand("sweep", "gate runs over V/(2J), N and sigma/N axes");
  add_run_flags(sweep, sweep_flags);
  auto* budget = app.add_subcommand("budget", "analytic error budget and experimental scales");
  add_run_flags(budget, budget_flags);

  bool check_json = false;
  bool inject_fault = false;
  auto* selfcheck = app.add_subcommand("selfcheck", "run the built-in oracle checks");
  selfcheck->add_flag("--json", check_json, "machine-readable check report");
  selfcheck->add_flag("--inject-fault", inject_fault)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : fermiswap::cli::kConfigError;
  }

  using namespace fermiswap::cli;
  if (*gate) return run(gate_flags, cmd_gate_run);
  if (*sweep) return run(sweep_flags, cmd_sweep);
  if (*budget) return run(budget_flags, cmd_budget);
  CommandOptions opts;
  opts.json = check_json;
  opts.inject_fault = inject_fault;
  return cmd_selfcheck(opts, std::cout, std::cerr);
}

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "fermiswap/cli.hpp"

namespace fermiswap::cli {

using nlohmann::json;
namespace fs = std::filesystem;

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

struct PointLabel {
  int N;
  double J;
  double V;
  double sigma;
  double tau;
  double tol;
};

std::string label_csv(const PointLabel& p) {
  return std::to_string(p.N) + "," + format_double(p.J) + "," + format_double(p.V) + "," + format_double(p.sigma) +
         "," + format_double(p.tau) + ",";
}

}  // namespace

json report_json(const GateReport& r, bool record_timing) {
  json j;
  j["N"] = r.N;
  j["J"] = r.J;
  j["V"] = r.V;
  j["sigma"] = r.sigma;
  j["tau"] = r.tau;
  j["tol"] = r.tol;
  j["phi_nl"] = r.phi_nl;
  j["phi_pred"] = number_or_null(r.phi_pred);
  j["f_mag"] = r.f_mag;
  j["f_swap"] = r.f_swap;
  j["distortion"] = number_or_null(r.distortion);
  j["chain_distortion"] = number_or_null(r.chain_distortion);
  j["norm_factor"] = r.norm_factor;
  j["R_centroid"] = r.R_centroid;
  j["L_centroid"] = r.L_centroid;
  j["R_tail_mass"] = r.R_tail_mass;
  j["L_tail_mass"] = r.L_tail_mass;
  j["propagator"] = {{"method", to_string(r.stats.method)},
                     {"steps", r.stats.steps},
                     {"matvecs", r.stats.matvecs},
                     {"error_bound", r.stats.error_bound}};
  j["wall_ms"] = record_timing ? r.wall_ms : 0.0;
  j["warnings"] = r.warnings;
  return j;
}

std::string gate_csv_header() { return "N,J,V,sigma,tau,phi_nl,phi_pred,f_mag,f_swap,distortion,tol,wall_ms"; }

std::string gate_csv_row(const GateReport& r, bool record_timing) {
  std::ostringstream s;
  s << label_csv({r.N, r.J, r.V, r.sigma, r.tau, r.tol}) << format_double(r.phi_nl) << ','
    << format_double(r.phi_pred) << ',' << format_double(r.f_mag) << ',' << format_double(r.f_swap) << ','
    << format_double(r.distortion) << ',' << format_double(r.tol) << ','
    << format_double(record_timing ? r.wall_ms : 0.0);
  return s.str();
}

json budget_json(const BudgetReport& r) {
  return {{"p1", r.p1},
          {"p2", r.p2},
          {"p3", r.p3},
          {"total", r.total},
          {"v_sites_per_s", r.v},
          {"T_s", r.T},
          {"bandwidth_rad_per_s", r.bandwidth},
          {"Omega_rad_per_s", r.Omega},
          {"Omega_over_2pi_hz", r.Omega / kTwoPi},
          {"order_of_magnitude", true},
          {"warnings", r.warnings}};
}

std::string budget_table(const BudgetReport& r, const ExperimentParams& p) {
  std::ostringstream s;
  auto line = [&](const char* name, double value, const char* unit) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-34s %14.6g  %s\n", name, value, unit);
    s << buf;
  };
  s << "error budget (order-of-magnitude, unit prefactors)\n";
  line("optical depth eta*N", p.eta * p.N, "");
  line("p1 ~ (t/U)^4", r.p1, "");
  line("p2 ~ 1/(eta N)", r.p2, "");
  line("p3 ~ gamma0 T", r.p3, "");
  line("p1 + p2 + p3", r.total, "");
  line("velocity v = 8 t^2/U", r.v, "sites/s");
  line("exchange time T = N/(2v)", r.T, "s");
  line("bandwidth ~ eta N Gamma", r.bandwidth, "rad/s");
  line("control Rabi Omega", r.Omega, "rad/s");
  line("control Rabi Omega/2pi", r.Omega / kTwoPi, "Hz");
  for (const auto& w : r.warnings) s << "warning: " << w << '\n';
  return s.str();
}

// ---------------------------------------------------------------------------

int cmd_gate_run(const RunConfig& config, const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  GateReport report;
  try {
    report = run_gate(gate_spec(config));
  } catch (const PropagationError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const InvalidArgument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  const json doc = report_json(report, config.record_timing);
  try {
    fs::create_directories(config.out_dir);
    write_file(fs::path(config.out_dir) / "gate_report.json", doc.dump(2) + "\n");
    write_file(fs::path(config.out_dir) / "gate_report.csv",
               gate_csv_header() + "\n" + gate_csv_row(report, config.record_timing) + "\n");
  } catch (const std::exception& e) {
    err << "output error: " << e.what() << '\n';
    return kConfigError;
  }

  if (opts.json) {
    out << doc.dump(2) << '\n';
  } else {
    out << "phi_nl   = " << format_double(report.phi_nl) << " rad\n"
        << "phi_pred = " << format_double(report.phi_pred) << " rad\n"
        << "f_mag    = " << format_double(report.f_mag) << '\n'
        << "f_swap   = " << format_double(report.f_swap) << '\n'
        << "D        = " << format_double(report.distortion) << '\n';
    for (const auto& w : report.warnings) out << "warning: " << w << '\n';
  }
  return kOk;
}

int cmd_sweep(const RunConfig& config, const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  const auto Ns = config.sweep.N.value_or(std::vector<int>{config.chain.N});
  const auto sigmas = config.sweep.sigma_over_N.value_or(std::vector<double>{config.sigma_over_N});
  const auto Vs = config.sweep.V_over_2J.value_or(std::vector<double>{config.couplings.V / (2.0 * config.couplings.J)});

  std::vector<GateRunSpec> specs;
  std::vector<std::string> spec_errors;
  for (int N : Ns) {
    for (double s : sigmas) {
      for (double v : Vs) {
        try {
          specs.push_back(gate_spec(config, N, s, config.sweep.V_over_2J ? std::optional<double>(v) : std::nullopt));
          spec_errors.emplace_back();
        } catch (const std::exception& e) {
          GateRunSpec placeholder;
          placeholder.chain.N = N;
          specs.push_back(placeholder);
          spec_errors.emplace_back(e.what());
        }
      }
    }
  }

  std::vector<GateRunSpec> runnable;
  std::vector<std::size_t> where;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (spec_errors[i].empty()) {
      runnable.push_back(specs[i]);
      where.push_back(i);
    }
  }
  auto outcomes = run_gate_batch(runnable, config.threads);
  std::vector<GateOutcome> all(specs.size());
  for (std::size_t i = 0; i < where.size(); ++i) all[where[i]] = std::move(outcomes[i]);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (!spec_errors[i].empty()) all[i].error = spec_errors[i];
  }

  std::ostringstream csv;
  csv << gate_csv_header() << ",error\n";
  int failures = 0;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (all[i].report) {
      csv << gate_csv_row(*all[i].report, config.record_timing) << ",\n";
      continue;
    }
    ++failures;
    const auto& s = specs[i];
    std::string msg = all[i].error;
    for (auto& ch : msg) {
      if (ch == ',' || ch == '\n' || ch == '"') ch = ';';
    }
    csv << label_csv({s.chain.N, s.couplings.J, s.couplings.V, s.R.sigma, s.tau.value_or(0.0), s.propagation.tol})
        << "nan,nan,nan,nan,nan," << format_double(s.propagation.tol) << ",0," << msg << '\n';
  }

  try {
    fs::create_directories(config.out_dir);
    write_file(fs::path(config.out_dir) / "sweep.csv", csv.str());
  } catch (const std::exception& e) {
    err << "output error: " << e.what() << '\n';
    return kConfigError;
  }
  if (opts.json) {
    json j = {{"points", specs.size()}, {"failures", failures}, {"csv", (fs::path(config.out_dir) / "sweep.csv").string()}};
    out << j.dump(2) << '\n';
  } else {
    out << csv.str();
  }
  if (failures > 0) {
    err << failures << " sweep point(s) failed; see the error column\n";
    return kNumericalFailure;
  }
  return kOk;
}

int cmd_budget(const RunConfig& config, const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  BudgetReport report;
  try {
    report = error_budget(config.experiment);
  } catch (const InvalidArgument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  const json doc = budget_json(report);
  const std::string table = budget_table(report, config.experiment);
  try {
    fs::create_directories(config.out_dir);
    write_file(fs::path(config.out_dir) / "budget.json", doc.dump(2) + "\n");
    write_file(fs::path(config.out_dir) / "budget.txt", table);
  } catch (const std::exception& e) {
    err << "output error: " << e.what() << '\n';
    return kConfigError;
  }
  if (opts.json)
    out << doc.dump(2) << '\n';
  else
    out << table;
  return kOk;
}

// ---------------------------------------------------------------------------

namespace {

struct CheckResult {
  std::string name;
  double residual;
  double threshold;
  bool passed() const { return residual <= threshold; }
};

Eigen::VectorXcd random_state(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = {g(rng), g(rng)};
  return v / v.norm();
}

std::vector<CheckResult> run_selfchecks(bool inject_fault) {
  std::vector<CheckResult> results;
  const SpinCouplings xx{1.0, 0.0};
  std::mt19937_64 rng(20100317);

  auto maybe_fault = [&](SectorHamiltonian H) { return inject_fault ? with_flipped_hop(std::move(H), 0) : H; };

  // Free-fermion factorization on an open chain.
  {
    const ChainSpec chain{40, 1.0, Boundary::open};
    const auto H = maybe_fault(build_hamiltonian(chain, xx));
    const auto R = make_packet({10.0, 2.0, kPi / 2, chain}).state;
    const auto L = make_packet({30.0, 2.0, -kPi / 2, chain}).state;
    const double tau = transit_time(chain, xx);
    PropagationOptions opt;
    opt.method = Propagator::chebyshev;
    const auto psi = evolve_two(product_state(R, L).state, H, tau, opt).state;
    const auto slater = determinant_state(evolve_single(R, xx, tau), evolve_single(L, xx, tau));
    results.push_back({"jw_factorization_N40", std::abs(1.0 - fidelity(slater, psi)), 1e-9});

    Eigen::VectorXcd x = random_state(H.dim(), rng);
    Eigen::VectorXcd y = random_state(H.dim(), rng);
    const cplx lhs = x.dot(H * y);
    const cplx rhs = std::conj(y.dot(H * x));
    results.push_back({"hermiticity_N40", std::abs(lhs - rhs), 1e-12});

    const auto drift = evolve_two({random_state(H.dim(), rng), chain}, H, 10.0 * tau, opt).state.norm();
    results.push_back({"unitarity_two_N40", std::abs(drift - 1.0), 1e-10});
    const auto single = evolve_single({random_state(40, rng), chain}, xx, 10.0 * tau).norm();
    results.push_back({"unitarity_single_N40", std::abs(single - 1.0), 1e-10});
  }

  // Plane-wave eigenstates and spectrum on a ring.
  {
    const ChainSpec ring{12, 1.0, Boundary::periodic};
    const auto H = maybe_fault(build_hamiltonian(ring, xx));
    const auto ks = periodic_momenta(ring.N);
    double worst = 0.0;
    std::vector<double> expected;
    for (std::size_t a = 0; a < ks.size(); ++a) {
      for (std::size_t b = 0; b < a; ++b) {
        const double E = dispersion(ks[a], xx.J) + dispersion(ks[b], xx.J);
        expected.push_back(E);
        const auto psi = antisymmetric_plane_wave(ring, ks[a], ks[b]);
        worst = std::max(worst, (H * psi.amps - E * psi.amps).norm());
      }
    }
    results.push_back({"eigenstate_residual_N12", worst, 1e-10});

    std::sort(expected.begin(), expected.end());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H.dense(), Eigen::EigenvaluesOnly);
    double diff = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      diff = std::max(diff, std::abs(solver.eigenvalues()(static_cast<Eigen::Index>(i)) - expected[i]));
    }
    results.push_back({"sector_spectrum_N12", diff, 1e-9});
  }
  return results;
}

}  // namespace

int cmd_selfcheck(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  std::vector<CheckResult> results;
  try {
    results = run_selfchecks(opts.inject_fault);
  } catch (const std::exception& e) {
    err << "self-check aborted: " << e.what() << '\n';
    return kNumericalFailure;
  }
  bool ok = true;
  for (const auto& r : results) ok = ok && r.passed();

  if (opts.json) {
    json checks = json::array();
    for (const auto& r : results) {
      checks.push_back({{"name", r.name}, {"residual", r.residual}, {"threshold", r.threshold}, {"passed", r.passed()}});
    }
    out << json{{"checks", checks}, {"passed", ok}}.dump(2) << '\n';
  } else {
    for (const auto& r : results) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%-26s residual %-12.3e threshold %-8.1e %s\n", r.name.c_str(), r.residual,
                    r.threshold, r.passed() ? "PASS" : "FAIL");
      out << buf;
    }
  }
  return ok ? kOk : kNumericalFailure;
}

}  // namespace fermiswap::cli

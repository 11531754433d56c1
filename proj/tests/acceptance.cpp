// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fermiswap/budget.hpp"
#include "fermiswap/cli.hpp"
#include "fermiswap/gate.hpp"
#include "oracles.hpp"

using namespace fermiswap;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double phase_error(double a, double b) { return std::abs(wrap_angle(a - b)); }

GateRunSpec headline_spec(int N, double V_over_2J) {
  GateRunSpec s;
  s.chain = {N, 1.0, Boundary::open};
  s.couplings = {1.0, 2.0 * V_over_2J};
  std::tie(s.R, s.L) = default_packets(s.chain, N / 10.0);
  return s;
}

const GateReport& headline() {
  static const GateReport r = run_gate(headline_spec(100, 0.0));
  return r;
}

Outcome exchange_phase() {
  const auto start = std::chrono::steady_clock::now();
  const auto& r = headline();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double err = phase_error(r.phi_nl, kPi);
  return {err <= 0.02 && r.f_mag >= 0.999 && secs < 30.0,
          "phi_nl=" + fmt("%.6f", r.phi_nl) + " |phi-pi|=" + fmt("%.2e", err) + " f_mag=" + fmt("%.6f", r.f_mag) +
              " runtime=" + fmt("%.2f", secs) + "s"};
}

Outcome distortion_figure() {
  const double D = headline().distortion;
  return {D >= 1e-5 && D <= 1e-3, "D=" + fmt("%.3e", D) + " (sigma=N/10, N=100)"};
}

Outcome tunable_phase() {
  const ChainSpec chain{200, 1.0, Boundary::open};
  const std::vector<double> V = {-2.0, -1.0, 0.0, 1.0, 2.0};
  const auto rows = phase_sweep(chain, 1.0, V, 20.0, std::nullopt, {}, 1);
  bool ok = rows.size() == V.size();
  double worst = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].outcome.report) return {false, "point V/2J=" + fmt("%g", V[i] / 2) + " failed: " + rows[i].outcome.error};
    const double expected = kPi - 2.0 * std::atan(V[i] / 2.0);
    const double err = phase_error(rows[i].outcome.report->phi_nl, expected);
    worst = std::max(worst, err);
    ok = ok && err <= 0.05;
  }
  return {ok, "max |phi_nl - (pi - 2 atan(V/2J))|=" + fmt("%.2e", worst) + " over 5 points, N=200"};
}

Outcome sector_spectrum() {
  const int N = 24;
  const ChainSpec ring{N, 1.0, Boundary::periodic};
  const SpinCouplings xx{1.0, 0.0};
  const auto H = build_hamiltonian(ring, xx);

  std::vector<double> ks;
  for (int m = -(N / 2) + 1; m <= N / 2; ++m) ks.push_back(2.0 * M_PI * m / N);
  std::vector<double> expected;
  double residual = 0.0;
  for (std::size_t a = 0; a < ks.size(); ++a) {
    for (std::size_t b = a + 1; b < ks.size(); ++b) {
      const double E = -2.0 * std::cos(ks[a]) - 2.0 * std::cos(ks[b]);
      expected.push_back(E);
      Eigen::MatrixXcd table = Eigen::MatrixXcd::Zero(N, N);
      for (int j = 1; j <= N; ++j) {
        for (int jp = j + 1; jp <= N; ++jp) {
          table(j - 1, jp - 1) = std::exp(oracle::cplx(0.0, ks[a] * j + ks[b] * jp)) -
                                 std::exp(oracle::cplx(0.0, ks[b] * j + ks[a] * jp));
        }
      }
      Eigen::VectorXcd psi = oracle::pairs_from_table(table);
      psi /= psi.norm();
      residual = std::max(residual, (H * psi - E * psi).norm());
    }
  }
  std::sort(expected.begin(), expected.end());
  const DenseSpectrum spectrum(H);
  const Eigen::VectorXd& ev = spectrum.eigenvalues();
  std::vector<double> got(ev.data(), ev.data() + ev.size());
  std::sort(got.begin(), got.end());
  double worst = got.size() == expected.size() ? 0.0 : 1e300;
  for (std::size_t i = 0; i < std::min(got.size(), expected.size()); ++i)
    worst = std::max(worst, std::abs(got[i] - expected[i]));
  return {worst <= 1e-9 && residual <= 1e-10,
          "max eigenvalue mismatch=" + fmt("%.2e", worst) + " max plane-wave residual=" + fmt("%.2e", residual) +
              " (M=" + std::to_string(ev.size()) + ")"};
}

Outcome jw_factorization() {
  struct Set {
    double cR, cL, sigma, kR, kL, tau;
  };
  const Set sets[] = {{10, 30, 2.0, M_PI / 2, -M_PI / 2, 10.0},
                      {8, 29, 1.8, M_PI / 3, -2 * M_PI / 3, 6.0},
                      {11, 32, 2.0, M_PI / 2, M_PI / 2, 5.0},
                      {7, 27, 1.5, 0.9, -1.3, 8.0},
                      {12, 33, 1.9, -M_PI / 2, -M_PI / 4, 4.0}};
  const int N = 40;
  const ChainSpec chain{N, 1.0, Boundary::open};
  const SpinCouplings xx{1.0, 0.0};
  const auto H = build_hamiltonian(chain, xx);
  double worst = 0.0;
  for (const auto& s : sets) {
    const Eigen::VectorXcd R0 = oracle::gaussian(N, s.cR, s.sigma, s.kR);
    const Eigen::VectorXcd L0 = oracle::gaussian(N, s.cL, s.sigma, s.kL);
    const auto start = product_state({R0, chain}, {L0, chain});
    const auto evolved = evolve_two(start.state, H, s.tau).state.amps;

    const Eigen::VectorXcd R = oracle::hopping_evolution(R0, xx.J, s.tau, false);
    const Eigen::VectorXcd L = oracle::hopping_evolution(L0, xx.J, s.tau, false);
    const Eigen::MatrixXcd table = R * L.transpose() - L * R.transpose();
    const Eigen::VectorXcd det = oracle::pairs_from_table(table);
    const double f = std::norm(det.dot(evolved)) / (det.squaredNorm() * evolved.squaredNorm());
    worst = std::max(worst, 1.0 - f);
  }
  return {worst <= 1e-9, "max infidelity=" + fmt("%.2e", worst) + " over 5 packet pairs, N=40"};
}

Outcome budget_regression() {
  ExperimentParams p;
  p.eta = 0.01;
  p.N = 1000;
  p.U = kTwoPi * 4000.0;
  p.tU_ratio_sq = 0.01;
  p.T_p = 100e-9;
  p.Gamma = kRb87D1Linewidth;
  const auto r = error_budget(p);
  const double omega_mhz = r.Omega / kTwoPi / 1e6;
  return {r.T >= 0.244 && r.T <= 0.254 && omega_mhz >= 8.0 && omega_mhz <= 12.0 && r.p1 == 1e-4,
          "T=" + fmt("%.4f", r.T) + "s Omega/2pi=" + fmt("%.3f", omega_mhz) + "MHz p1=" + fmt("%.3g", r.p1)};
}

Outcome storage_geometry() {
  const double a = 0.5e-6;
  StorageGeometry g;
  g.k_photon = kPi / a;
  g.k_control = kPi / a;
  g.theta_c = kPi / 3;
  const double k = storage_momentum(g, a);
  double worst_trip = 0.0;
  for (double target : {kPi / 2, kPi / 3, 1.0, 2.0, 0.25}) {
    const double theta = solve_storage_angle(target, g.k_photon, g.k_control, a);
    StorageGeometry back = g;
    back.theta_c = theta;
    worst_trip = std::max(worst_trip, phase_error(storage_momentum(back, a), target));
  }
  const double theta_half = solve_storage_angle(kPi / 2, g.k_photon, g.k_control, a);
  return {std::abs(k - kPi / 2) <= 1e-12 && worst_trip <= 1e-12 && std::abs(theta_half - kPi / 3) <= 1e-12,
          "k0=" + fmt("%.15f", k) + " solved angle=" + fmt("%.6f", theta_half * 180 / kPi) +
              "deg round-trip error=" + fmt("%.1e", worst_trip)};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

Outcome properties() {
  const ChainSpec chain{40, 1.0, Boundary::open};
  const ChainSpec ring{40, 1.0, Boundary::periodic};
  const SpinCouplings xxz{1.0, 0.7};
  const double T = transit_time(chain, xxz);

  double herm = 0.0;
  for (const auto& c : {chain, ring}) {
    const Eigen::MatrixXd D = build_hamiltonian(c, xxz).dense();
    herm = std::max(herm, (D - D.transpose()).cwiseAbs().maxCoeff());
  }

  const auto H = build_hamiltonian(chain, xxz);
  Eigen::VectorXcd start = Eigen::VectorXcd::Zero(H.dim());
  for (Eigen::Index i = 0; i < start.size(); ++i) start(i) = oracle::cplx(std::sin(0.37 * i), std::cos(1.3 * i + 0.2));
  start /= start.norm();
  double drift = 0.0;
  for (double tau : {T, 5 * T, 10 * T}) {
    drift = std::max(drift, std::abs(evolve_two({start, chain}, H, tau).state.norm() - 1.0));
    const Eigen::VectorXcd single = oracle::gaussian(40, 12, 3, 1.0);
    drift = std::max(drift, std::abs(evolve_single({single, chain}, xxz, tau).norm() - 1.0));
  }

  auto spec = headline_spec(60, 0.35);
  const double base = run_gate(spec).phi_nl;
  spec.diagonal_shift = 1.7;
  const double shifted = run_gate(spec).phi_nl;
  const double immunity = std::abs(shifted - base);

  const fs::path root = fs::temp_directory_path() / "fermiswap_acceptance";
  fs::remove_all(root);
  auto config = cli::parse_config(nlohmann::json{{"chain", {{"N", 60}}}, {"sweep", {{"V_over_2J", {-0.5, 0.0, 0.5}}}}});
  bool identical = true;
  std::string first;
  for (int run = 0; run < 3; ++run) {
    config.out_dir = (root / std::to_string(run)).string();
    config.threads = run == 0 ? 1 : 3;
    std::ostringstream out, err;
    if (cli::cmd_gate_run(config, {}, out, err) != cli::kOk || cli::cmd_sweep(config, {}, out, err) != cli::kOk)
      return {false, "determinism run failed: " + err.str()};
    std::string all;
    for (const char* f : {"gate_report.json", "gate_report.csv", "sweep.csv"}) all += slurp(fs::path(config.out_dir) / f);
    if (run == 0) first = all;
    identical = identical && all == first && !all.empty();
  }
  fs::remove_all(root);

  return {drift <= 1e-10 && herm <= 1e-12 && immunity <= 1e-10 && identical,
          "norm drift=" + fmt("%.1e", drift) + " hermiticity=" + fmt("%.1e", herm) + " shift immunity=" +
              fmt("%.1e", immunity) + " reruns " + (identical ? "bit-identical" : "DIFFER")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 exchange phase", exchange_phase},     {"2 distortion figure", distortion_figure},
      {"3 tunable phase", tunable_phase},       {"4 two-excitation spectrum", sector_spectrum},
      {"5 free-fermion factorization", jw_factorization}, {"6 budget regression", budget_regression},
      {"7 storage geometry", storage_geometry}, {"8 property suites", properties},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.passed) ++failures;
    std::printf("%s [%s] %s\n", o.passed ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}

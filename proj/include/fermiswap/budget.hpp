#pragma once

#include <string>
#include <vector>

#include "fermiswap/model.hpp"

namespace fermiswap {

/// Natural linewidth of the 87Rb D1 line, Gamma = 2 pi x 5.7500 MHz
/// (D. A. Steck, "Rubidium 87 D Line Data").
inline constexpr double kRb87D1Linewidth = kTwoPi * 5.7500e6;

/// Experimental scales. Rates in rad/s, times in s.
struct ExperimentParams {
  double eta = 0.01;          // per-atom optical depth
  int N = 1000;               // atoms, one per site
  double Gamma = kRb87D1Linewidth;
  double gamma0 = 1.0;        // s-g coherence decay rate, 1/s (about 1 s coherence)
  double T_p = 100e-9;        // photon duration
  double U = kTwoPi * 4000.0;
  double tU_ratio_sq = 0.01;  // (t/U)^2

  void validate() const;
  /// eta above 1 is unphysical for a per-atom optical depth; flagged, not rejected.
  bool eta_warning() const { return eta > 1.0; }
};

/// All entries are order-of-magnitude estimates with unit prefactors.
struct BudgetReport {
  double p1 = 0.0;         // finite t/U: (t/U)^4
  double p2 = 0.0;         // storage/retrieval: 1/(eta N)
  double p3 = 0.0;         // decoherence: gamma0 T
  double v = 0.0;          // sites/s at the symmetric point, 2J = 8 t^2/U
  double T = 0.0;          // N / (2 v)
  double bandwidth = 0.0;  // eta N Gamma
  double Omega = 0.0;      // sqrt(eta N Gamma / T_p)
  double total = 0.0;      // p1 + p2 + p3
  std::vector<std::string> warnings;
};

BudgetReport error_budget(const ExperimentParams& params);

/// Peak control Rabi frequency sqrt(eta N Gamma / T_p).
double control_rabi(const ExperimentParams& params);

}  // namespace fermiswap

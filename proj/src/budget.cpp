#include "fermiswap/budget.hpp"

#include <cmath>

namespace fermiswap {

void ExperimentParams::validate() const {
  if (!(eta > 0.0)) throw InvalidArgument("ExperimentParams: eta must be positive");
  if (N <= 0) throw InvalidArgument("ExperimentParams: N must be positive");
  if (!(Gamma > 0.0)) throw InvalidArgument("ExperimentParams: Gamma must be positive");
  if (!(gamma0 > 0.0)) throw InvalidArgument("ExperimentParams: gamma0 must be positive");
  if (!(T_p > 0.0)) throw InvalidArgument("ExperimentParams: T_p must be positive");
  if (!(U > 0.0)) throw InvalidArgument("ExperimentParams: U must be positive");
  if (!(tU_ratio_sq > 0.0)) throw InvalidArgument("ExperimentParams: tU_ratio_sq must be positive");
}

double control_rabi(const ExperimentParams& params) {
  if (!(params.T_p > 0.0)) throw InvalidArgument("control_rabi: T_p must be positive");
  return std::sqrt(params.eta * params.N * params.Gamma / params.T_p);
}

BudgetReport error_budget(const ExperimentParams& params) {
  params.validate();
  BudgetReport r;
  const double optical_depth = params.eta * params.N;
  r.p1 = params.tU_ratio_sq * params.tU_ratio_sq;
  r.p2 = 1.0 / optical_depth;
  // symmetric point: J = 4 t^2 / U, v = 2 J
  r.v = 8.0 * params.tU_ratio_sq * params.U;
  r.T = params.N / (2.0 * r.v);
  r.p3 = params.gamma0 * r.T;
  r.bandwidth = optical_depth * params.Gamma;
  r.Omega = control_rabi(params);
  r.total = r.p1 + r.p2 + r.p3;
  if (params.eta_warning()) r.warnings.push_back("eta > 1");
  if (params.tU_ratio_sq > 0.04) r.warnings.push_back("t/U above the weak-tunneling threshold 0.2");
  return r;
}

}  // namespace fermiswap

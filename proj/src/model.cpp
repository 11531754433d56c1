#include "fermiswap/model.hpp"

#include <algorithm>

namespace fermiswap {

void HubbardParams::validate() const {
  if (!(U_gg > 0.0) || !(U_ss > 0.0) || !(U_sg > 0.0)) {
    throw InvalidArgument("HubbardParams: interaction energies U_gg, U_ss, U_sg must be positive");
  }
  if (!(t_g >= 0.0) || !(t_s >= 0.0)) {
    throw InvalidArgument("HubbardParams: tunneling amplitudes must be nonnegative");
  }
}

double HubbardParams::tunneling_ratio() const {
  return std::max(t_g, t_s) / std::min({U_gg, U_ss, U_sg});
}

std::string to_string(Boundary b) { return b == Boundary::open ? "open" : "periodic"; }

Boundary boundary_from_string(const std::string& s) {
  if (s == "open") return Boundary::open;
  if (s == "periodic") return Boundary::periodic;
  throw InvalidArgument("unknown boundary '" + s + "' (expected open or periodic)");
}

void ChainSpec::validate() const {
  if (N < 4) throw InvalidArgument("ChainSpec: N must be at least 4");
  if (!(a > 0.0)) throw InvalidArgument("ChainSpec: lattice spacing must be positive");
}

SpinCouplings derive_couplings(const HubbardParams& p) {
  p.validate();
  const double tg2 = p.t_g * p.t_g;
  const double ts2 = p.t_s * p.t_s;
  SpinCouplings c;
  c.J = 2.0 * p.t_g * p.t_s / p.U_sg;
  c.V = 2.0 * (tg2 + ts2) / p.U_sg - 4.0 * tg2 / p.U_gg - 4.0 * ts2 / p.U_ss;
  return c;
}

}  // namespace fermiswap

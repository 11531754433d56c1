#include "fermiswap/wavepacket.hpp"

#include <algorithm>
#include <cmath>

namespace fermiswap {

void PacketSpec::validate() const {
  chain.validate();
  if (!(center >= 1.0 && center <= chain.N)) throw InvalidArgument("PacketSpec: center must lie in [1, N]");
  if (!(sigma >= 1.0)) throw InvalidArgument("PacketSpec: sigma must be at least one site");
  if (!(std::abs(carrier) <= kPi)) throw InvalidArgument("PacketSpec: carrier must lie in [-pi, pi]");
}

double tail_mass(const SingleExcitationState& state) {
  const int N = state.chain.N;
  const double mid = 0.5 * N;
  double mass = 0.0;
  for (int j = 1; j <= N; ++j) {
    const bool near_edge = (j - 1 <= Packet::kTailSites) || (N - j <= Packet::kTailSites);
    const bool near_mid = std::abs(j - mid) <= Packet::kTailSites;
    if (near_edge || near_mid) mass += std::norm(state.amps(j - 1));
  }
  return mass;
}

Packet make_packet(const PacketSpec& spec) {
  spec.validate();
  const int N = spec.chain.N;
  Eigen::VectorXcd amps(N);
  const double inv = 1.0 / (4.0 * spec.sigma * spec.sigma);
  for (int j = 1; j <= N; ++j) {
    const double d = j - spec.center;
    amps(j - 1) = std::polar(std::exp(-d * d * inv), spec.carrier * j);
  }
  amps /= amps.norm();
  Packet p{{amps, spec.chain}, 0.0, true};
  p.tail_mass = tail_mass(p.state);
  p.valid = p.tail_mass <= Packet::kTailMassLimit;
  return p;
}

void StorageGeometry::validate() const {
  if (!(k_photon > 0.0) || !(k_control > 0.0)) throw InvalidArgument("StorageGeometry: wavenumbers must be positive");
  if (!(theta_c >= 0.0 && theta_c <= kPi)) throw InvalidArgument("StorageGeometry: theta_c must lie in [0, pi]");
}

double fold_momentum(double k) { return wrap_angle(k); }

double storage_momentum(const StorageGeometry& geom, double a) {
  geom.validate();
  if (!(a > 0.0)) throw InvalidArgument("storage_momentum: lattice spacing must be positive");
  const double sign = geom.direction == PhotonDirection::plus_axis ? 1.0 : -1.0;
  const double k_axis = sign * (geom.k_photon - geom.k_control * std::cos(geom.theta_c));
  return fold_momentum(k_axis * a);
}

double solve_storage_angle(double k0, double k_photon, double k_control, double a, PhotonDirection direction) {
  if (!(k_photon > 0.0) || !(k_control > 0.0) || !(a > 0.0)) {
    throw InvalidArgument("solve_storage_angle: wavenumbers and lattice spacing must be positive");
  }
  const double sign = direction == PhotonDirection::plus_axis ? 1.0 : -1.0;
  // |k_axis| <= k_photon + k_control bounds the useful Brillouin-zone images.
  const int m_max = static_cast<int>(std::ceil((k_photon + k_control) * a / kTwoPi)) + 1;
  for (int step = 0; step <= 2 * m_max; ++step) {
    const int m = (step % 2 == 0) ? step / 2 : -(step + 1) / 2;
    const double k_axis = (k0 + kTwoPi * m) / a;
    const double cos_theta = (k_photon - sign * k_axis) / k_control;
    if (std::abs(cos_theta) <= 1.0 + 1e-12) return std::acos(std::clamp(cos_theta, -1.0, 1.0));
  }
  throw NoStorageAngle("solve_storage_angle: no control angle stores the requested carrier");
}

}  // namespace fermiswap

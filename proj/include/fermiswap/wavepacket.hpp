#pragma once

#include "fermiswap/freefermion.hpp"
#include "fermiswap/model.hpp"

namespace fermiswap {

/// Gaussian spin-wave envelope. center is in sites (1-based, may be fractional),
/// sigma is the rms width of |amps|^2 in sites, carrier in rad/site.
struct PacketSpec {
  double center = 25.0;
  double sigma = 10.0;
  double carrier = kPi / 2;
  ChainSpec chain;

  void validate() const;
};

struct Packet {
  SingleExcitationState state;
  /// |amps|^2 within kTailSites of either chain end or of N/2
  double tail_mass = 0.0;
  bool valid = true;

  static constexpr int kTailSites = 2;
  static constexpr double kTailMassLimit = 1e-6;
};

/// amps(j) ~ exp(-(j - center)^2 / (4 sigma^2)) exp(i carrier j), normalized.
/// The k-space rms width is 1 / (2 sigma).
Packet make_packet(const PacketSpec& spec);

/// |amps|^2 on sites within Packet::kTailSites of site 1, site N or N/2.
double tail_mass(const SingleExcitationState& state);

enum class PhotonDirection { plus_axis, minus_axis };

/// Storage kinematics. Wavenumbers in rad/m; theta_c is the angle between the
/// control beam and the chain axis.
///
/// Sign convention: for a photon along +axis the spin-wave wavevector is
/// |k_i| - |k_c| cos(theta_c); a photon along -axis is the mirror image,
/// -(|k_i| - |k_c| cos(theta_c)).
struct StorageGeometry {
  double k_photon = kPi;
  double k_control = kPi;
  double theta_c = kPi / 3;
  PhotonDirection direction = PhotonDirection::plus_axis;

  void validate() const;
};

/// Wraps an angle into (-pi, pi].
double fold_momentum(double k);

/// Spin-wave carrier in rad/site for lattice spacing a (meters).
double storage_momentum(const StorageGeometry& geom, double a);

class NoStorageAngle : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Control-beam angle in [0, pi] that stores carrier k0 (rad/site). Brillouin-zone
/// images k0 + 2 pi m are tried in order of increasing |m|. Throws NoStorageAngle
/// if none is reachable.
double solve_storage_angle(double k0, double k_photon, double k_control, double a,
                           PhotonDirection direction = PhotonDirection::plus_axis);

}  // namespace fermiswap

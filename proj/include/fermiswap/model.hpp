#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fermiswap {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Raised for inputs that violate a documented precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Two-component Bose-Hubbard parameters. All energies are angular
/// frequencies (rad/s, hbar = 1).
struct HubbardParams {
  double t_g = 0.0;
  double t_s = 0.0;
  double U_gg = 1.0;
  double U_ss = 1.0;
  double U_sg = 1.0;

  void validate() const;

  /// max(t_g, t_s) / min(U_gg, U_ss, U_sg)
  double tunneling_ratio() const;

  /// Superexchange is only trustworthy for t << U; diagnostic, never an error.
  bool weak_tunneling_warning() const { return tunneling_ratio() > kWeakTunnelingThreshold; }

  static constexpr double kWeakTunnelingThreshold = 0.2;
};

/// XXZ chain couplings (rad/s). May be derived from HubbardParams or given directly.
struct SpinCouplings {
  double J = 1.0;
  double V = 0.0;
};

enum class Boundary { open, periodic };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

struct ChainSpec {
  int N = 100;
  double a = 1.0;  // lattice spacing, meters
  Boundary boundary = Boundary::open;

  void validate() const;
};

/// J = 2 t_g t_s / U_sg,  V = 2 (t_g^2 + t_s^2) / U_sg - 4 t_g^2 / U_gg - 4 t_s^2 / U_ss
SpinCouplings derive_couplings(const HubbardParams& p);

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double x) {
  double r = std::remainder(x, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

/// Free-fermion band energy -2 J cos(k).
inline double dispersion(double k, double J) { return -2.0 * J * std::cos(k); }

}  // namespace fermiswap

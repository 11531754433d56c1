#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "fermiswap/model.hpp"

namespace fermiswap {

using cplx = std::complex<double>;

/// One spin flip on the chain: amplitude per site. Index i holds site j = i + 1.
struct SingleExcitationState {
  Eigen::VectorXcd amps;
  ChainSpec chain;

  double norm() const { return amps.norm(); }
  /// sum_j j |amps(j)|^2 / sum_j |amps(j)|^2, sites counted from 1.
  double centroid() const;
  cplx at_site(int j) const { return amps(j - 1); }
};

cplx overlap(const SingleExcitationState& bra, const SingleExcitationState& ket);
/// |<a|b>|^2
double fidelity(const SingleExcitationState& a, const SingleExcitationState& b);

/// Single-particle eigenbasis of the XX chain.
///
/// periodic: plane waves e^{ikj}/sqrt(N), k = 2 pi m / N folded into (-pi, pi].
/// open:     sqrt(2/(N+1)) sin(k_m j), k_m = pi m / (N+1), m = 1..N.
/// Mode functions are stored column-wise, so coefficients are modes^H psi.
struct ModeBasis {
  Boundary boundary = Boundary::open;
  std::vector<double> momenta;
  std::vector<double> energies;
  Eigen::MatrixXcd modes;

  static ModeBasis build(const ChainSpec& chain, double J);

  Eigen::VectorXcd to_modes(const Eigen::VectorXcd& sites) const { return modes.adjoint() * sites; }
  Eigen::VectorXcd to_sites(const Eigen::VectorXcd& coeffs) const { return modes * coeffs; }
};

/// Grid momenta 2 pi m / N in (-pi, pi], ascending.
std::vector<double> periodic_momenta(int N);

/// q~(k) = N^{-1/2} sum_j q(j) e^{-ikj} on the periodic grid (ordering as periodic_momenta).
Eigen::VectorXcd fourier(const SingleExcitationState& state);
/// q(j) = N^{-1/2} sum_k q~(k) e^{ikj}
Eigen::VectorXcd inverse_fourier(const Eigen::VectorXcd& k_amps);

/// Multiply each mode coefficient by exp(-i tau energies[m]) and transform back.
SingleExcitationState evolve_in_basis(const SingleExcitationState& state, const ModeBasis& basis,
                                      const std::vector<double>& energies, double tau);

/// Exact XX evolution in the basis matching state.chain.boundary.
SingleExcitationState evolve_single(const SingleExcitationState& state, const SpinCouplings& couplings,
                                    double tau);

/// <psi|H|psi> evaluated in the mode basis.
double single_energy(const SingleExcitationState& state, const SpinCouplings& couplings);

enum class Carrier { right, left };  // k0 = +pi/2, k0 = -pi/2

inline double carrier_momentum(Carrier c) { return c == Carrier::right ? kPi / 2 : -kPi / 2; }

/// Maps +-pi/2 (within 1e-9) to a Carrier; throws for anything else.
Carrier carrier_from_momentum(double k0);

/// Linearized band eps_lin(k) = +-v (k -+ pi/2) around the declared carrier, with k
/// unwrapped onto the branch (k0 - pi, k0 + pi].
std::vector<double> linearized_energies(const std::vector<double>& momenta, double J, Carrier carrier);

/// Distortion-free translation by v tau sites in the periodic basis; reproduces the
/// global phase exp(i tau J pi). Throws when no carrier is declared.
SingleExcitationState linear_transport_reference(const SingleExcitationState& state,
                                                 const SpinCouplings& couplings, double tau,
                                                 std::optional<Carrier> carrier);

/// d eps / dk = 2 J sin(k), in sites per second.
inline double group_velocity(const SpinCouplings& c, double k) { return 2.0 * c.J * std::sin(k); }

}  // namespace fermiswap

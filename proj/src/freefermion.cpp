#include "fermiswap/freefermion.hpp"

#include <cmath>

namespace fermiswap {

double SingleExcitationState::centroid() const {
  double mass = 0.0;
  double moment = 0.0;
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    const double w = std::norm(amps(i));
    mass += w;
    moment += static_cast<double>(i + 1) * w;
  }
  return moment / mass;
}

cplx overlap(const SingleExcitationState& bra, const SingleExcitationState& ket) {
  if (bra.amps.size() != ket.amps.size()) throw InvalidArgument("overlap: chain lengths differ");
  return bra.amps.dot(ket.amps);  // conjugates bra
}

double fidelity(const SingleExcitationState& a, const SingleExcitationState& b) {
  return std::norm(overlap(a, b));
}

std::vector<double> periodic_momenta(int N) {
  std::vector<double> k;
  k.reserve(static_cast<std::size_t>(N));
  // m runs over (-N/2, N/2], so k covers (-pi, pi]
  for (int m = -((N - 1) / 2); m <= N / 2; ++m) k.push_back(kTwoPi * m / N);
  return k;
}

ModeBasis ModeBasis::build(const ChainSpec& chain, double J) {
  chain.validate();
  const int N = chain.N;
  ModeBasis b;
  b.boundary = chain.boundary;
  b.modes.resize(N, N);
  if (chain.boundary == Boundary::periodic) {
    b.momenta = periodic_momenta(N);
    const double norm = 1.0 / std::sqrt(static_cast<double>(N));
    for (int m = 0; m < N; ++m) {
      for (int j = 1; j <= N; ++j) b.modes(j - 1, m) = std::polar(norm, b.momenta[m] * j);
    }
  } else {
    b.momenta.resize(N);
    const double norm = std::sqrt(2.0 / (N + 1));
    for (int m = 1; m <= N; ++m) {
      const double k = kPi * m / (N + 1);
      b.momenta[m - 1] = k;
      for (int j = 1; j <= N; ++j) b.modes(j - 1, m - 1) = norm * std::sin(k * j);
    }
  }
  b.energies.resize(N);
  for (int m = 0; m < N; ++m) b.energies[m] = dispersion(b.momenta[m], J);
  return b;
}

Eigen::VectorXcd fourier(const SingleExcitationState& state) {
  const auto N = static_cast<int>(state.amps.size());
  const auto ks = periodic_momenta(N);
  const double norm = 1.0 / std::sqrt(static_cast<double>(N));
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(N);
  for (int m = 0; m < N; ++m) {
    cplx acc = 0.0;
    for (int j = 1; j <= N; ++j) acc += state.amps(j - 1) * std::polar(1.0, -ks[m] * j);
    out(m) = norm * acc;
  }
  return out;
}

Eigen::VectorXcd inverse_fourier(const Eigen::VectorXcd& k_amps) {
  const auto N = static_cast<int>(k_amps.size());
  const auto ks = periodic_momenta(N);
  const double norm = 1.0 / std::sqrt(static_cast<double>(N));
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(N);
  for (int j = 1; j <= N; ++j) {
    cplx acc = 0.0;
    for (int m = 0; m < N; ++m) acc += k_amps(m) * std::polar(1.0, ks[m] * j);
    out(j - 1) = norm * acc;
  }
  return out;
}

SingleExcitationState evolve_in_basis(const SingleExcitationState& state, const ModeBasis& basis,
                                      const std::vector<double>& energies, double tau) {
  if (state.amps.size() != basis.modes.rows()) throw InvalidArgument("evolve: basis size mismatch");
  Eigen::VectorXcd c = basis.to_modes(state.amps);
  for (Eigen::Index m = 0; m < c.size(); ++m) c(m) *= std::polar(1.0, -tau * energies[m]);
  return {basis.to_sites(c), state.chain};
}

SingleExcitationState evolve_single(const SingleExcitationState& state, const SpinCouplings& couplings,
                                    double tau) {
  if (tau < 0.0) throw InvalidArgument("evolve_single: tau must be nonnegative");
  const auto basis = ModeBasis::build(state.chain, couplings.J);
  return evolve_in_basis(state, basis, basis.energies, tau);
}

double single_energy(const SingleExcitationState& state, const SpinCouplings& couplings) {
  const auto basis = ModeBasis::build(state.chain, couplings.J);
  const Eigen::VectorXcd c = basis.to_modes(state.amps);
  double e = 0.0;
  for (Eigen::Index m = 0; m < c.size(); ++m) e += std::norm(c(m)) * basis.energies[m];
  return e;
}

Carrier carrier_from_momentum(double k0) {
  if (std::abs(k0 - kPi / 2) < 1e-9) return Carrier::right;
  if (std::abs(k0 + kPi / 2) < 1e-9) return Carrier::left;
  throw InvalidArgument("linear transport needs a carrier of +pi/2 or -pi/2");
}

std::vector<double> linearized_energies(const std::vector<double>& momenta, double J, Carrier carrier) {
  const double k0 = carrier_momentum(carrier);
  const double sign = carrier == Carrier::right ? 1.0 : -1.0;
  const double v = 2.0 * J;
  std::vector<double> e(momenta.size());
  for (std::size_t m = 0; m < momenta.size(); ++m) {
    double k = momenta[m];
    while (k <= k0 - kPi) k += kTwoPi;
    while (k > k0 + kPi) k -= kTwoPi;
    e[m] = sign * v * (k - k0);
  }
  return e;
}

SingleExcitationState linear_transport_reference(const SingleExcitationState& state,
                                                 const SpinCouplings& couplings, double tau,
                                                 std::optional<Carrier> carrier) {
  if (!carrier) throw InvalidArgument("linear_transport_reference: carrier momentum not declared");
  ChainSpec ring = state.chain;
  ring.boundary = Boundary::periodic;
  const auto basis = ModeBasis::build(ring, couplings.J);
  const auto lin = linearized_energies(basis.momenta, couplings.J, *carrier);
  auto out = evolve_in_basis(state, basis, lin, tau);
  out.chain = state.chain;
  return out;
}

}  // namespace fermiswap

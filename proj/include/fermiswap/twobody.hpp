#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fermiswap/freefermion.hpp"
#include "fermiswap/model.hpp"

namespace fermiswap {

/// Raised when an iterative propagator cannot meet its error target within budget.
class PropagationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ordered site pairs 1 <= j < j' <= N mapped onto 0..M-1, M = N(N-1)/2,
/// in lexicographic order.
class PairBasis {
 public:
  explicit PairBasis(int N);

  int sites() const { return N_; }
  std::size_t dim() const { return pairs_.size(); }

  std::size_t index(int j, int jp) const;
  std::pair<int, int> pair(std::size_t idx) const { return pairs_[idx]; }

 private:
  int N_;
  std::vector<std::pair<int, int>> pairs_;
};

/// Two spin flips: amplitude on |j, j'> = S+_j S+_j' |vac>, j < j'.
struct TwoExcitationState {
  Eigen::VectorXcd amps;
  ChainSpec chain;

  double norm() const { return amps.norm(); }
  cplx at(int j, int jp) const;
};

cplx overlap(const TwoExcitationState& bra, const TwoExcitationState& ket);
double fidelity(const TwoExcitationState& a, const TwoExcitationState& b);

/// Two-flip block of the XXZ chain:
///   -J between pairs related by one excitation hopping to an empty neighbour,
///   V on the diagonal for nearest-neighbour pairs,
///   plus an optional uniform diagonal shift.
/// Stored as real CSR. On a periodic ring the wrap-around hop crosses the
/// other excitation, so it carries the fermionic string sign (+J).
class SectorHamiltonian {
 public:
  const ChainSpec& chain() const { return chain_; }
  const SpinCouplings& couplings() const { return couplings_; }
  double diagonal_shift() const { return shift_; }
  std::size_t dim() const { return row_ptr_.size() - 1; }

  /// y = H x
  void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const;
  Eigen::VectorXcd operator*(const Eigen::VectorXcd& x) const;

  /// Matrix element <row|H|col>, zero if absent.
  double element(std::size_t row, std::size_t col) const;
  Eigen::MatrixXd dense() const;

  /// Gershgorin enclosure [lo, hi] of the spectrum.
  std::pair<double, double> spectral_bounds() const;

  std::size_t nonzeros() const { return vals_.size(); }

 private:
  friend SectorHamiltonian build_hamiltonian(const ChainSpec&, const SpinCouplings&, double);
  friend SectorHamiltonian with_flipped_hop(SectorHamiltonian, std::size_t);

  ChainSpec chain_;
  SpinCouplings couplings_;
  double shift_ = 0.0;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> cols_;
  std::vector<double> vals_;
};

SectorHamiltonian build_hamiltonian(const ChainSpec& chain, const SpinCouplings& couplings,
                                    double diagonal_shift = 0.0);

/// Copy of H with the sign of the first off-diagonal element in `row` flipped,
/// which breaks Hermiticity. Negative control for the self-check suite.
SectorHamiltonian with_flipped_hop(SectorHamiltonian H, std::size_t row);

enum class Propagator { automatic, dense, chebyshev };

std::string to_string(Propagator p);
Propagator propagator_from_string(const std::string& s);

struct PropagationOptions {
  double tol = 1e-10;
  Propagator method = Propagator::automatic;
  /// automatic picks the dense eigendecomposition at or below this sector dimension
  std::size_t dense_limit = 500;
  /// largest (half spectral width) x (time step) handled by one Chebyshev series
  double max_step_phase = 25.0;
  int max_terms_per_step = 400;
};

struct PropagationStats {
  Propagator method = Propagator::dense;
  int steps = 0;
  int matvecs = 0;
  double error_bound = 0.0;
};

struct TwoEvolution {
  TwoExcitationState state;
  PropagationStats stats;
};

/// psi(tau) = exp(-i H tau) psi(0) to within options.tol in the 2-norm.
TwoEvolution evolve_two(const TwoExcitationState& state, const SectorHamiltonian& H, double tau,
                        const PropagationOptions& options = {});

/// Full eigendecomposition of a sector Hamiltonian, reusable across times.
class DenseSpectrum {
 public:
  explicit DenseSpectrum(const SectorHamiltonian& H);

  const Eigen::VectorXd& eigenvalues() const { return values_; }
  const Eigen::MatrixXd& eigenvectors() const { return vectors_; }
  Eigen::VectorXcd evolve(const Eigen::VectorXcd& psi, double tau) const;

 private:
  Eigen::VectorXd values_;
  Eigen::MatrixXd vectors_;
};

struct ProductState {
  TwoExcitationState state;
  /// norm of R(j)L(j') + R(j')L(j) before renormalization; 1 for disjoint packets,
  /// sqrt(2 (1 - sum_j |R_j|^4)) for R = L.
  double norm_factor = 0.0;
};

/// S+ operators on distinct sites commute, so amps(j, j') = R(j)L(j') + R(j')L(j).
ProductState product_state(const SingleExcitationState& R, const SingleExcitationState& L);

/// Free-fermion (Slater) form R(j)L(j') - R(j')L(j), normalized.
TwoExcitationState determinant_state(const SingleExcitationState& R, const SingleExcitationState& L);

/// Normalized sum_{j<j'} (e^{ikj} e^{ipj'} - e^{ipj} e^{ikj'}) |j, j'>, k and p on the periodic grid.
TwoExcitationState antisymmetric_plane_wave(const ChainSpec& chain, double k, double p);

}  // namespace fermiswap

#include "fermiswap/twobody.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace fermiswap {

PairBasis::PairBasis(int N) : N_(N) {
  if (N < 2) throw InvalidArgument("PairBasis: need at least two sites");
  pairs_.reserve(static_cast<std::size_t>(N) * (N - 1) / 2);
  for (int j = 1; j <= N; ++j) {
    for (int jp = j + 1; jp <= N; ++jp) pairs_.emplace_back(j, jp);
  }
}

std::size_t PairBasis::index(int j, int jp) const {
  if (!(1 <= j && j < jp && jp <= N_)) throw InvalidArgument("PairBasis: pair must satisfy 1 <= j < j' <= N");
  const auto a = static_cast<std::size_t>(j - 1);
  const auto n = static_cast<std::size_t>(N_);
  return a * (2 * n - a - 1) / 2 + static_cast<std::size_t>(jp - j - 1);
}

cplx TwoExcitationState::at(int j, int jp) const { return amps(PairBasis(chain.N).index(j, jp)); }

cplx overlap(const TwoExcitationState& bra, const TwoExcitationState& ket) {
  if (bra.amps.size() != ket.amps.size()) throw InvalidArgument("overlap: sector dimensions differ");
  return bra.amps.dot(ket.amps);
}

double fidelity(const TwoExcitationState& a, const TwoExcitationState& b) { return std::norm(overlap(a, b)); }

// ---------------------------------------------------------------------------

SectorHamiltonian build_hamiltonian(const ChainSpec& chain, const SpinCouplings& couplings,
                                    double diagonal_shift) {
  chain.validate();
  const int N = chain.N;
  const bool ring = chain.boundary == Boundary::periodic;
  const PairBasis basis(N);
  const double J = couplings.J;

  SectorHamiltonian H;
  H.chain_ = chain;
  H.couplings_ = couplings;
  H.shift_ = diagonal_shift;
  H.row_ptr_.reserve(basis.dim() + 1);
  H.row_ptr_.push_back(0);

  std::vector<std::pair<std::size_t, double>> row;
  for (std::size_t r = 0; r < basis.dim(); ++r) {
    const auto [j, jp] = basis.pair(r);
    row.clear();

    const bool adjacent = (jp == j + 1) || (ring && j == 1 && jp == N);
    const double diag = (adjacent ? couplings.V : 0.0) + diagonal_shift;
    if (diag != 0.0) row.emplace_back(r, diag);

    // Each excitation hops to an empty neighbour. Moving within the ordered
    // interval never passes the other excitation, so the element is -J.
    auto hop = [&](int moved, int target, int other) {
      if (target < 1 || target > N || target == other) return;
      const int lo = std::min(target, other);
      const int hi = std::max(target, other);
      const bool crosses = (moved < other) != (target < other);
      row.emplace_back(basis.index(lo, hi), crosses ? J : -J);
    };
    hop(j, j - 1, jp);
    hop(j, j + 1, jp);
    hop(jp, jp - 1, j);
    hop(jp, jp + 1, j);
    if (ring) {
      if (j == 1) hop(j, N, jp);
      if (jp == N) hop(jp, 1, j);
    }

    std::sort(row.begin(), row.end());
    for (const auto& [c, v] : row) {
      if (v == 0.0) continue;
      H.cols_.push_back(c);
      H.vals_.push_back(v);
    }
    H.row_ptr_.push_back(H.cols_.size());
  }
  return H;
}

void SectorHamiltonian::apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
  const std::size_t M = dim();
  y.resize(static_cast<Eigen::Index>(M));
  for (std::size_t r = 0; r < M; ++r) {
    cplx acc = 0.0;
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) acc += vals_[p] * x(cols_[p]);
    y(r) = acc;
  }
}

Eigen::VectorXcd SectorHamiltonian::operator*(const Eigen::VectorXcd& x) const {
  Eigen::VectorXcd y;
  apply(x, y);
  return y;
}

double SectorHamiltonian::element(std::size_t row, std::size_t col) const {
  const auto first = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row]);
  const auto last = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row + 1]);
  const auto it = std::lower_bound(first, last, col);
  if (it == last || *it != col) return 0.0;
  return vals_[static_cast<std::size_t>(it - cols_.begin())];
}

Eigen::MatrixXd SectorHamiltonian::dense() const {
  const auto M = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(M, M);
  for (std::size_t r = 0; r < dim(); ++r) {
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) D(r, cols_[p]) = vals_[p];
  }
  return D;
}

std::pair<double, double> SectorHamiltonian::spectral_bounds() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t r = 0; r < dim(); ++r) {
    double diag = 0.0;
    double radius = 0.0;
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
      if (cols_[p] == r)
        diag = vals_[p];
      else
        radius += std::abs(vals_[p]);
    }
    lo = std::min(lo, diag - radius);
    hi = std::max(hi, diag + radius);
  }
  return {lo, hi};
}

SectorHamiltonian with_flipped_hop(SectorHamiltonian H, std::size_t row) {
  for (std::size_t p = H.row_ptr_.at(row); p < H.row_ptr_.at(row + 1); ++p) {
    if (H.cols_[p] != row) {
      H.vals_[p] = -H.vals_[p];
      return H;
    }
  }
  throw InvalidArgument("with_flipped_hop: row has no off-diagonal element");
}

// ---------------------------------------------------------------------------

std::string to_string(Propagator p) {
  switch (p) {
    case Propagator::automatic: return "auto";
    case Propagator::dense: return "dense";
    case Propagator::chebyshev: return "chebyshev";
  }
  return "auto";
}

Propagator propagator_from_string(const std::string& s) {
  if (s == "auto") return Propagator::automatic;
  if (s == "dense") return Propagator::dense;
  if (s == "chebyshev") return Propagator::chebyshev;
  throw InvalidArgument("unknown propagator '" + s + "' (expected auto, dense or chebyshev)");
}

DenseSpectrum::DenseSpectrum(const SectorHamiltonian& H) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H.dense());
  if (solver.info() != Eigen::Success) throw PropagationError("dense eigendecomposition failed");
  values_ = solver.eigenvalues();
  vectors_ = solver.eigenvectors();
}

Eigen::VectorXcd DenseSpectrum::evolve(const Eigen::VectorXcd& psi, double tau) const {
  Eigen::VectorXcd c = vectors_.transpose().cast<cplx>() * psi;
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) *= std::polar(1.0, -tau * values_(i));
  return vectors_.cast<cplx>() * c;
}

namespace {

// sum_{m > K} 2 |J_m(x)| <= 2 (x/2)^{K+1} / (K+1)! / (1 - (x/2)/(K+2)), valid once K + 2 > x/2.
double chebyshev_tail_bound(int K, double x) {
  const double half = 0.5 * x;
  const double ratio = half / (K + 2);
  if (ratio >= 1.0) return std::numeric_limits<double>::infinity();
  const double log_term = (K + 1) * std::log(half) - std::lgamma(K + 2.0);
  return 2.0 * std::exp(log_term) / (1.0 - ratio);
}

struct ChebyshevSeries {
  std::vector<cplx> coeffs;
  double tail = 0.0;
};

ChebyshevSeries chebyshev_series(double x, double tol, int max_terms) {
  ChebyshevSeries s;
  const cplx minus_i(0.0, -1.0);
  cplx phase(1.0, 0.0);
  for (int n = 0;; ++n) {
    if (n >= max_terms) {
      throw PropagationError("Chebyshev propagator: step budget of " + std::to_string(max_terms) +
                             " terms exceeded at x = " + std::to_string(x));
    }
    const double jn = std::cyl_bessel_j(static_cast<double>(n), x);
    s.coeffs.push_back((n == 0 ? 1.0 : 2.0) * phase * jn);
    phase *= minus_i;
    if (n + 1 > x) {
      const double tail = chebyshev_tail_bound(n, x);
      if (tail <= tol) {
        s.tail = tail;
        return s;
      }
    }
  }
}

TwoEvolution chebyshev_evolve(const TwoExcitationState& state, const SectorHamiltonian& H, double tau,
                              const PropagationOptions& opt) {
  TwoEvolution out{state, {}};
  out.stats.method = Propagator::chebyshev;
  if (tau == 0.0) return out;

  const auto [lo, hi] = H.spectral_bounds();
  const double center = 0.5 * (hi + lo);
  const double half = 0.5 * (hi - lo);
  if (half <= 0.0) {
    out.state.amps *= std::polar(1.0, -center * tau);
    out.stats.steps = 1;
    return out;
  }

  const int steps = std::max(1, static_cast<int>(std::ceil(half * tau / opt.max_step_phase)));
  const double dt = tau / steps;
  const auto series = chebyshev_series(half * dt, opt.tol / steps, opt.max_terms_per_step);
  const cplx center_phase = std::polar(1.0, -center * dt);
  const double inv_half = 1.0 / half;

  const auto M = static_cast<Eigen::Index>(H.dim());
  Eigen::VectorXcd prev(M), curr(M), next(M), acc(M);
  Eigen::VectorXcd& psi = out.state.amps;

  // (H - center) / half, applied into dst
  auto scaled_apply = [&](const Eigen::VectorXcd& src, Eigen::VectorXcd& dst) {
    H.apply(src, dst);
    dst = (dst - center * src) * inv_half;
  };

  for (int s = 0; s < steps; ++s) {
    prev = psi;
    acc = series.coeffs[0] * prev;
    if (series.coeffs.size() > 1) {
      scaled_apply(prev, curr);
      ++out.stats.matvecs;
      acc += series.coeffs[1] * curr;
      for (std::size_t n = 2; n < series.coeffs.size(); ++n) {
        scaled_apply(curr, next);
        ++out.stats.matvecs;
        next = 2.0 * next - prev;
        acc += series.coeffs[n] * next;
        std::swap(prev, curr);
        std::swap(curr, next);
      }
    }
    psi = center_phase * acc;
  }
  out.stats.steps = steps;
  out.stats.error_bound = steps * series.tail;
  return out;
}

}  // namespace

TwoEvolution evolve_two(const TwoExcitationState& state, const SectorHamiltonian& H, double tau,
                        const PropagationOptions& options) {
  if (!(options.tol >= 1e-14 && options.tol <= 1e-6)) {
    throw InvalidArgument("evolve_two: tolerance must lie in [1e-14, 1e-6]");
  }
  if (tau < 0.0) throw InvalidArgument("evolve_two: tau must be nonnegative");
  if (static_cast<std::size_t>(state.amps.size()) != H.dim()) {
    throw InvalidArgument("evolve_two: state and Hamiltonian dimensions differ");
  }

  Propagator method = options.method;
  if (method == Propagator::automatic) {
    method = H.dim() <= options.dense_limit ? Propagator::dense : Propagator::chebyshev;
  }
  if (method == Propagator::chebyshev) return chebyshev_evolve(state, H, tau, options);

  TwoEvolution out{state, {}};
  out.stats.method = Propagator::dense;
  out.stats.steps = 1;
  if (tau != 0.0) out.state.amps = DenseSpectrum(H).evolve(state.amps, tau);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void require_same_chain(const SingleExcitationState& R, const SingleExcitationState& L) {
  if (R.amps.size() != L.amps.size() || R.chain.N != L.chain.N) {
    throw InvalidArgument("two-excitation state: packets live on chains of different length");
  }
}

}  // namespace

ProductState product_state(const SingleExcitationState& R, const SingleExcitationState& L) {
  require_same_chain(R, L);
  const int N = R.chain.N;
  const PairBasis basis(N);
  Eigen::VectorXcd amps(static_cast<Eigen::Index>(basis.dim()));
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const auto [j, jp] = basis.pair(i);
    amps(i) = R.amps(j - 1) * L.amps(jp - 1) + R.amps(jp - 1) * L.amps(j - 1);
  }
  const double n = amps.norm();
  if (n == 0.0) throw InvalidArgument("product_state: packets give a vanishing two-excitation state");
  return {{amps / n, R.chain}, n};
}

TwoExcitationState determinant_state(const SingleExcitationState& R, const SingleExcitationState& L) {
  require_same_chain(R, L);
  const PairBasis basis(R.chain.N);
  Eigen::VectorXcd amps(static_cast<Eigen::Index>(basis.dim()));
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const auto [j, jp] = basis.pair(i);
    amps(i) = R.amps(j - 1) * L.amps(jp - 1) - R.amps(jp - 1) * L.amps(j - 1);
  }
  const double n = amps.norm();
  if (n == 0.0) throw InvalidArgument("determinant_state: packets are linearly dependent");
  return {amps / n, R.chain};
}

TwoExcitationState antisymmetric_plane_wave(const ChainSpec& chain, double k, double p) {
  chain.validate();
  const int N = chain.N;
  auto on_grid = [N](double q) {
    const double m = q * N / kTwoPi;
    return std::abs(m - std::round(m)) < 1e-9;
  };
  if (!on_grid(k) || !on_grid(p)) throw InvalidArgument("antisymmetric_plane_wave: momenta must lie on the 2 pi / N grid");
  const double dm = (k - p) * N / kTwoPi;
  if (std::abs(dm - N * std::round(dm / N)) < 1e-9) {
    throw InvalidArgument("antisymmetric_plane_wave: k = p gives a vanishing state");
  }
  const PairBasis basis(N);
  Eigen::VectorXcd amps(static_cast<Eigen::Index>(basis.dim()));
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const auto [j, jp] = basis.pair(i);
    amps(i) = std::polar(1.0, k * j + p * jp) - std::polar(1.0, p * j + k * jp);
  }
  return {amps / amps.norm(), chain};
}

}  // namespace fermiswap

#pragma once
// Independent reference computations for the test suites. Nothing here calls
// into the propagation code it is used to check.

#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace oracle {

using cplx = std::complex<double>;

/// Exact rational arithmetic on small integers.
struct Fraction {
  long long num = 0;
  long long den = 1;

  Fraction(long long n = 0, long long d = 1) : num(n), den(d) { reduce(); }
  void reduce() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend Fraction operator+(Fraction a, Fraction b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
  friend Fraction operator-(Fraction a, Fraction b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
  friend Fraction operator*(Fraction a, Fraction b) { return {a.num * b.num, a.den * b.den}; }
  friend Fraction operator/(Fraction a, Fraction b) { return {a.num * b.den, a.den * b.num}; }
  friend bool operator==(Fraction a, Fraction b) { return a.num == b.num && a.den == b.den; }
};

/// Single-excitation evolution by dense diagonalization of the N x N hopping matrix.
inline Eigen::VectorXcd hopping_evolution(const Eigen::VectorXcd& psi, double J, double tau, bool ring) {
  const auto N = psi.size();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(N, N);
  for (Eigen::Index i = 0; i + 1 < N; ++i) H(i, i + 1) = H(i + 1, i) = -J;
  if (ring) H(0, N - 1) = H(N - 1, 0) = -J;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  Eigen::VectorXcd c = es.eigenvectors().transpose().cast<cplx>() * psi;
  for (Eigen::Index i = 0; i < N; ++i) c(i) *= std::exp(cplx(0.0, -tau * es.eigenvalues()(i)));
  return es.eigenvectors().cast<cplx>() * c;
}

/// Naive DFT with e^{-ikj}/sqrt(N), sites j = 1..N, momenta 2 pi m / N for m = -(N-1)/2..N/2.
inline Eigen::VectorXcd naive_dft(const Eigen::VectorXcd& q) {
  const int N = static_cast<int>(q.size());
  Eigen::VectorXcd out(N);
  int row = 0;
  for (int m = -((N - 1) / 2); m <= N / 2; ++m, ++row) {
    const double k = 2.0 * M_PI * m / N;
    cplx s = 0.0;
    for (int j = 1; j <= N; ++j) s += q(j - 1) * std::exp(cplx(0.0, -k * j));
    out(row) = s / std::sqrt(static_cast<double>(N));
  }
  return out;
}

/// Pair amplitudes psi(j, j') for j < j' in lexicographic order, from a full N x N table.
inline Eigen::VectorXcd pairs_from_table(const Eigen::MatrixXcd& table) {
  const auto N = table.rows();
  std::vector<cplx> v;
  for (Eigen::Index j = 0; j < N; ++j) {
    for (Eigen::Index jp = j + 1; jp < N; ++jp) v.push_back(table(j, jp));
  }
  return Eigen::Map<Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

/// Gaussian envelope exp(-(j - c)^2 / (4 s^2)) e^{i k j}, normalized, sites 1..N.
inline Eigen::VectorXcd gaussian(int N, double c, double s, double k) {
  Eigen::VectorXcd v(N);
  for (int j = 1; j <= N; ++j) v(j - 1) = std::exp(-(j - c) * (j - c) / (4 * s * s)) * std::exp(cplx(0.0, k * j));
  return v / v.norm();
}

}  // namespace oracle

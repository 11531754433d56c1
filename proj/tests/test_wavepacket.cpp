#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fermiswap/wavepacket.hpp"

using namespace fermiswap;

TEST_CASE("packets are normalized and centred") {
  const ChainSpec chain{100, 1.0, Boundary::open};
  for (double c : {20.0, 25.0, 31.5}) {
    const auto p = make_packet({c, 3.0, kPi / 2, chain});
    CHECK(std::abs(p.state.norm() - 1.0) <= 1e-12);
    REQUIRE(p.valid);
    CHECK(p.state.centroid() == doctest::Approx(c).epsilon(0.01 / c));
  }
}

TEST_CASE("tail-mass flag") {
  const ChainSpec chain{100, 1.0, Boundary::open};
  // direct summation over sites 1-3, 98-100 and 48-52
  auto tails = [&](double center, double sigma) {
    double norm = 0.0, tail = 0.0;
    for (int j = 1; j <= 100; ++j) {
      const double w = std::exp(-(j - center) * (j - center) / (2 * sigma * sigma));
      norm += w;
      if (j <= 3 || j >= 98 || (j >= 48 && j <= 52)) tail += w;
    }
    return tail / norm;
  };
  SUBCASE("sigma = N/10 at N/4 reaches the edge and the middle") {
    const auto p = make_packet({25.0, 10.0, kPi / 2, chain});
    CHECK(p.tail_mass == doctest::Approx(tails(25.0, 10.0)).epsilon(1e-12));
    CHECK(p.tail_mass > 1e-2);
    CHECK_FALSE(p.valid);
  }
  SUBCASE("narrow packet is clear") {
    const auto p = make_packet({25.0, 3.5, kPi / 2, chain});
    CHECK(p.tail_mass == doctest::Approx(tails(25.0, 3.5)).epsilon(1e-9));
    CHECK(p.tail_mass <= Packet::kTailMassLimit);
    CHECK(p.valid);
  }
}

TEST_CASE("packet parameter validation") {
  const ChainSpec chain{40, 1.0, Boundary::open};
  CHECK_THROWS_AS(make_packet({0.5, 3.0, 0.0, chain}), InvalidArgument);
  CHECK_THROWS_AS(make_packet({41.0, 3.0, 0.0, chain}), InvalidArgument);
  CHECK_THROWS_AS(make_packet({10.0, 0.5, 0.0, chain}), InvalidArgument);
  CHECK_THROWS_AS(make_packet({10.0, 3.0, 3.5, chain}), InvalidArgument);
}

TEST_CASE("wide packet peaks at the grid momentum nearest the carrier") {
  for (int N : {64, 90, 101}) {
    const ChainSpec chain{N, 1.0, Boundary::periodic};
    const auto q = fourier(make_packet({N / 2.0, N / 4.0, kPi / 2, chain}).state);
    const auto ks = periodic_momenta(N);
    Eigen::Index peak;
    q.cwiseAbs().maxCoeff(&peak);
    std::size_t nearest = 0;
    for (std::size_t m = 0; m < ks.size(); ++m) {
      if (std::abs(ks[m] - kPi / 2) < std::abs(ks[nearest] - kPi / 2)) nearest = m;
    }
    CHECK(static_cast<std::size_t>(peak) == nearest);
  }
}

TEST_CASE("k-space mass is balanced around the peak") {
  const int N = 100;
  const ChainSpec chain{N, 1.0, Boundary::periodic};
  for (double sigma : {N / 20.0, N / 10.0, N / 8.0}) {
    const auto q = fourier(make_packet({25.0, sigma, kPi / 2, chain}).state);
    Eigen::Index peak;
    q.cwiseAbs().maxCoeff(&peak);
    double below = 0.0, above = 0.0;
    for (int d = 1; d < N / 2; ++d) {
      below += std::norm(q((peak - d + N) % N));
      above += std::norm(q((peak + d) % N));
    }
    CHECK(std::abs(above - below) <= 1e-3);
  }
}

TEST_CASE("gate-layout packets are nearly orthogonal") {
  const ChainSpec chain{100, 1.0, Boundary::open};
  const auto R = make_packet({25.0, 10.0, kPi / 2, chain}).state;
  const auto L = make_packet({75.0, 10.0, -kPi / 2, chain}).state;
  CHECK(std::abs(overlap(R, L)) <= 1e-8);
}

TEST_CASE("storage kinematics") {
  const double a = 0.5e-6;
  const double k = kPi / a;
  SUBCASE("60 degree control stores pi/2") {
    CHECK(std::abs(storage_momentum({k, k, kPi / 3, PhotonDirection::plus_axis}, a) - kPi / 2) <= 1e-12);
    CHECK(std::abs(storage_momentum({k, k, kPi / 3, PhotonDirection::minus_axis}, a) + kPi / 2) <= 1e-12);
  }
  SUBCASE("perpendicular control adds nothing") {
    const double ki = 0.3 * kPi / a;
    CHECK(storage_momentum({ki, k, kPi / 2, PhotonDirection::plus_axis}, a) == doctest::Approx(ki * a));
  }
  SUBCASE("collinear equal wavenumbers cancel") {
    CHECK(std::abs(storage_momentum({k, k, 0.0, PhotonDirection::plus_axis}, a)) <= 1e-12);
  }
  SUBCASE("result folds into the Brillouin zone") {
    const double kf = storage_momentum({1.8 * k, k, kPi / 2, PhotonDirection::plus_axis}, a);
    CHECK(kf == doctest::Approx(-0.2 * kPi));
    CHECK(fold_momentum(-kPi) == doctest::Approx(kPi));
  }
  SUBCASE("invalid geometry") {
    CHECK_THROWS_AS(storage_momentum({-1.0, k, 0.3, PhotonDirection::plus_axis}, a), InvalidArgument);
    CHECK_THROWS_AS(storage_momentum({k, k, 4.0, PhotonDirection::plus_axis}, a), InvalidArgument);
  }
}

TEST_CASE("storage angle solver") {
  const double a = 0.5e-6;
  const double k = kPi / a;
  CHECK(solve_storage_angle(kPi / 2, k, k, a) == doctest::Approx(kPi / 3).epsilon(1e-12));
  CHECK(solve_storage_angle(-kPi / 2, k, k, a, PhotonDirection::minus_axis) == doctest::Approx(kPi / 3).epsilon(1e-12));
  const double ki = 0.4 * kPi / a;
  CHECK(solve_storage_angle(ki * a, ki, k, a) == doctest::Approx(kPi / 2).epsilon(1e-12));

  SUBCASE("round trip on random feasible targets") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int i = 0; i < 200; ++i) {
      const double kp = u(rng) * kTwoPi / a;
      const double kc = u(rng) * kTwoPi / a;
      const double theta = u(rng) * kPi;
      const auto dir = i % 2 ? PhotonDirection::plus_axis : PhotonDirection::minus_axis;
      const double target = storage_momentum({kp, kc, theta, dir}, a);
      const double solved = solve_storage_angle(target, kp, kc, a, dir);
      CHECK(std::abs(wrap_angle(storage_momentum({kp, kc, solved, dir}, a) - target)) <= 1e-12);
    }
  }
  SUBCASE("unreachable carrier") {
    const double small = 0.01 * kPi / a;
    CHECK_THROWS_AS(solve_storage_angle(kPi / 2, small, small, a), NoStorageAngle);
  }
}

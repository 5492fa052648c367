#include "halfgeo/error.hpp"
#include "halfgeo/pathspace.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <Eigen/Eigenvalues>

#include <numbers>

using namespace halfgeo;

TEST_CASE("L^2 <= E with equality for constant speed") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    std::vector<double> l(1 + k % 17);
    for (double& x : l) x = u(rng);
    const auto p = DiscretePath::from_lengths(l);
    CHECK(p.length() * p.length() <= p.energy() * (1 + 1e-15));
    const auto flat = DiscretePath::from_lengths(std::vector<double>(l.size(), 0.3));
    CHECK(std::abs(flat.energy() - flat.length() * flat.length()) <= 1e-12);
    CHECK(flat.constant_speed());
  }
}

TEST_CASE("one doubled segment makes the inequality strict") {
  std::vector<double> l(10, 0.1);
  l[4] = 0.2;
  const auto p = DiscretePath::from_lengths(l);
  CHECK(p.energy() > p.length() * p.length() + 1e-3);
  CHECK(!p.constant_speed());
}

TEST_CASE("energy on the uniform grid is N sum l^2") {
  const auto p = DiscretePath::from_lengths({1.0, 2.0, 0.5});
  CHECK(p.energy() == doctest::Approx(3 * (1 + 4 + 0.25)).epsilon(1e-15));
  CHECK(p.length() == 3.5);
}

TEST_CASE("concatenation identity examples") {
  const auto tail = DiscretePath::from_lengths({0.25, 0.25});
  // E(c) = 4: a constant-speed path of length 2
  const auto c4 = DiscretePath::from_lengths({0.5, 0.5, 0.5, 0.5});
  REQUIRE(c4.energy() == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(std::abs(concatenate(c4, tail, 0.5).energy() - 8.5) < 1e-12);
  CHECK(concatenated_energy(4.0, 0.5) == 8.5);

  // E(c) = 0: constant path
  const auto c0 = DiscretePath::from_lengths({0.0, 0.0, 0.0});
  CHECK(std::abs(concatenate(c0, tail, 0.5).energy() - 0.5) < 1e-12);

  // E(c) = 4.1 from a non-constant-speed path
  const auto c41 = DiscretePath::from_lengths({1.0, std::sqrt(1.05)});
  REQUIRE(std::abs(c41.energy() - 4.1) < 1e-14);
  const auto joined = concatenate(c41, tail, 0.5);
  CHECK(std::abs(joined.energy() - 8.7) < 1e-12);
  CHECK(joined.energy() <= 2 * 4.1 + 0.5 + 1e-12);
  CHECK(joined.times()[2] == 0.5);
  CHECK(joined.length() == doctest::Approx(c41.length() + 0.5));
}

TEST_CASE("concatenation identity on random paths and eps") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    std::vector<double> l(1 + k % 9);
    for (double& x : l) x = u(rng);
    const auto c = DiscretePath::from_lengths(l);
    const double eps = 0.01 + 0.98 * u(rng);
    const int m = 1 + k % 4;
    const auto tail = DiscretePath::from_lengths(std::vector<double>(m, eps / m));
    const double e = concatenate(c, tail, eps).energy();
    CHECK(std::abs(e - concatenated_energy(c.energy(), eps)) <= 1e-12 * std::max(1.0, e));
  }
}

TEST_CASE("concatenation preconditions") {
  const auto c = DiscretePath::from_lengths({1.0});
  for (double eps : {0.0, 1.0, -0.2, 1.5}) {
    try {
      concatenate(c, DiscretePath::from_lengths({0.5}), eps);
      FAIL("expected EpsilonOutOfRange");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::EpsilonOutOfRange);
    }
  }
  CHECK_THROWS_AS(concatenate(c, DiscretePath::from_lengths({0.4}), 0.5), Error);        // wrong length
  CHECK_THROWS_AS(concatenate(c, DiscretePath::from_lengths({0.1, 0.4}), 0.5), Error);   // not constant speed
}

TEST_CASE("paths along surfaces") {
  const Surface s = Surface::sphere(1);
  const auto g = shoot(s, Vec3(1, 0, 0), Vec3(0, 1, 0), 2.0);
  const auto c = DiscretePath::from_geodesic(s, g, 40);
  CHECK(c.length() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(c.energy() == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(c.points().size() == 41);

  const auto t = shoot(s, c.points().back(), sample_at(s, g, 2.0).v, 0.5);
  const auto tail = DiscretePath::from_geodesic(s, t, 5);
  const auto joined = concatenate(c, tail, 0.5);
  CHECK(joined.points().size() == 46);
  CHECK(std::abs(joined.energy() - concatenated_energy(c.energy(), 0.5)) < 1e-12);

  const auto wrong = DiscretePath::from_geodesic(s, shoot(s, Vec3(0, 0, 1), Vec3(1, 0, 0), 0.5), 5);
  CHECK_THROWS_AS(concatenate(c, wrong, 0.5), Error);  // tail starts elsewhere

  const auto poly = DiscretePath::from_points(s, {Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)});
  CHECK(poly.segments() == 2);
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(DiscretePath({0.0, 1.0}, {}), Error);
  CHECK_THROWS_AS(DiscretePath({0.0, 0.5}, {1.0}), Error);
  CHECK_THROWS_AS(DiscretePath({0.0, 0.6, 0.4, 1.0}, {1.0, 1.0, 1.0}), Error);
  CHECK_THROWS_AS(DiscretePath({0.0, 1.0}, {-1.0}), Error);
  CHECK_THROWS_AS(DiscretePath({0.0, 1.0}, {1.0}, {Vec3::Zero()}), Error);
}

TEST_CASE("discrete Hessian index on the sphere") {
  const Surface s = Surface::sphere(1);
  auto gc = [&](double L) { return shoot(s, Vec3(1, 0, 0), Vec3(0, 1, 0), L); };
  CHECK(discrete_hessian_index(s, gc(3.2), 200) == 1);
  CHECK(discrete_hessian_index(s, gc(2.5), 200) == 0);
  CHECK(discrete_hessian_index(s, gc(7.0), 200) == 2);
  CHECK_THROWS_AS(discrete_hessian_index(s, gc(1.0), 1), Error);
}

TEST_CASE("tridiagonal inertia matches eigenvalues") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 100; ++k) {
    const int n = 1 + k % 12;
    std::vector<double> d(n), o(n - 1);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = d[i] = u(rng);
    for (int i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = o[i] = u(rng);
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues();
    CHECK(tridiagonal_negative_count(d, o) == (ev.array() < 0.0).count());
  }
}

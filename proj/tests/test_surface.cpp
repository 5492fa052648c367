#include "halfgeo/error.hpp"
#include "halfgeo/surface.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <Eigen/Geometry>

using namespace halfgeo;

namespace {

Surface bumpy() {
  // x^4 + y^4 + z^4 + x^2 + y^2 + z^2 - 2: convex, star-shaped, no symmetry shortcuts
  std::vector<PolynomialTerm> t = {{1, 4, 0, 0}, {1, 0, 4, 0}, {1, 0, 0, 4}, {1, 2, 0, 0},
                                   {1, 0, 2, 0}, {1, 0, 0, 2}, {-2, 0, 0, 0}};
  return Surface(CustomImplicit{t, 1.0}, "bumpy");
}

}  // namespace

TEST_CASE("projection examples") {
  auto close = [](const Vec3& a, const Vec3& b) { return (a - b).norm() < 1e-12; };
  CHECK(close(project_to_surface(Surface::sphere(1), Vec3(2, 0, 0)), Vec3(1, 0, 0)));
  CHECK(close(project_to_surface(Surface::oblate(0.8), Vec3(0, 0, 2)), Vec3(0, 0, 0.8)));
  CHECK(close(project_to_surface(Surface::triaxial(1, 1.05, 1.1), Vec3(0, 0, 1.2)), Vec3(0, 0, 1.1)));
}

TEST_CASE("tangent projection examples") {
  auto close = [](const Vec3& a, const Vec3& b) { return (a - b).norm() < 1e-14; };
  CHECK(close(tangent_project(Surface::sphere(1), Vec3(1, 0, 0), Vec3(1, 1, 0)), Vec3(0, 1, 0)));
  CHECK(close(tangent_project(Surface::sphere(1), Vec3(0, 0, 1), Vec3(0, 1, 0)), Vec3(0, 1, 0)));
  CHECK(close(tangent_project(Surface::oblate(0.8), Vec3(0, 0, 0.8), Vec3(0, 0, 1)), Vec3(0, 0, 0)));
}

TEST_CASE("gradient and Hessian match finite differences") {
  std::mt19937_64 rng(7);
  auto surfaces = oracle::builtins();
  surfaces.push_back(bumpy());
  const double h = 1e-5;
  for (const auto& s : surfaces) {
    CAPTURE(s.name());
    for (int k = 0; k < 20; ++k) {
      const Vec3 x = 1.1 * oracle::random_point(s, rng);
      Vec3 g_fd;
      Mat3 h_fd;
      for (int i = 0; i < 3; ++i) {
        const Vec3 e = h * Vec3::Unit(i);
        g_fd[i] = (s.phi(x + e) - s.phi(x - e)) / (2 * h);
        h_fd.col(i) = (s.grad(x + e) - s.grad(x - e)) / (2 * h);
      }
      CHECK((s.grad(x) - g_fd).norm() < 1e-8);
      CHECK((s.hess(x) - h_fd).norm() < 1e-8);
    }
  }
}

TEST_CASE("projection is idempotent and lands on the surface") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> r(0.5, 2.0);
  auto surfaces = oracle::builtins();
  surfaces.push_back(bumpy());
  for (const auto& s : surfaces) {
    CAPTURE(s.name());
    for (int k = 0; k < 50; ++k) {
      const Vec3 x = r(rng) * oracle::random_point(s, rng);
      const Vec3 p = project_to_surface(s, x);
      CHECK(std::abs(s.phi(p)) < 1e-11);
      CHECK((project_to_surface(s, p) - p).norm() < 1e-13);
      // closest point: the offset is normal
      const Vec3 n = unit_normal(s, p);
      CHECK((x - p - (x - p).dot(n) * n).norm() < 1e-9);
    }
  }
}

TEST_CASE("closest point beats nearby surface points") {
  const Surface s = Surface::triaxial(1, 1.05, 1.1);
  const Vec3 x(0.9, 0.7, -0.8);
  const Vec3 p = project_to_surface(s, x);
  const TangentFrame f = tangent_frame(s, p);
  for (int k = 0; k < 16; ++k) {
    const double a = 2 * M_PI * k / 16;
    const Vec3 q = project_to_surface(s, p + 1e-3 * (std::cos(a) * f.e1 + std::sin(a) * f.e2));
    CHECK((x - q).norm() >= (x - p).norm() - 1e-15);
  }
}

TEST_CASE("Gauss curvature") {
  CHECK(gauss_curvature(Surface::sphere(1), Vec3(0, 1, 0)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gauss_curvature(Surface::sphere(2), Vec3(0, 0, 2)) == doctest::Approx(0.25).epsilon(1e-14));
  // oblate: K = 1/c^2 on the equator, c^2 at the poles
  const Surface o = Surface::oblate(0.8);
  CHECK(gauss_curvature(o, Vec3(1, 0, 0)) == doctest::Approx(1.5625).epsilon(1e-12));
  CHECK(gauss_curvature(o, Vec3(0, 0, 0.8)) == doctest::Approx(0.64).epsilon(1e-12));
  // triaxial at the axis endpoint (a,0,0): K = a^2 / (b^2 c^2)
  const Surface t = Surface::triaxial(1, 1.05, 1.1);
  CHECK(gauss_curvature(t, Vec3(1, 0, 0)) == doctest::Approx(1.0 / (1.05 * 1.05 * 1.1 * 1.1)).epsilon(1e-12));
  const auto [k1, k2] = principal_curvatures(t, Vec3(1, 0, 0));
  CHECK(k1 == doctest::Approx(1.0 / (1.05 * 1.05)).epsilon(1e-12));
  CHECK(k2 == doctest::Approx(1.0 / (1.1 * 1.1)).epsilon(1e-12));
  CHECK(normal_curvature(t, Vec3(1, 0, 0), Vec3(0, 0, 1)) == doctest::Approx(k2).epsilon(1e-12));
}

TEST_CASE("tangent frame is orthonormal and oriented") {
  std::mt19937_64 rng(3);
  for (const auto& s : oracle::builtins()) {
    for (int k = 0; k < 20; ++k) {
      const Vec3 p = oracle::random_point(s, rng);
      const TangentFrame f = tangent_frame(s, p);
      CHECK(std::abs(f.e1.dot(f.e2)) < 1e-14);
      CHECK(std::abs(f.e1.norm() - 1) < 1e-14);
      CHECK((f.e1.cross(f.e2) - f.normal).norm() < 1e-13);
      CHECK((f.normal - unit_normal(s, p)).norm() < 1e-14);
    }
  }
}

TEST_CASE("invalid parameters and degenerate gradients") {
  CHECK_THROWS_AS(Surface::sphere(-1), Error);
  CHECK_THROWS_AS(Surface::oblate(1.5), Error);
  CHECK_THROWS_AS(Surface::triaxial(1, 0, 1), Error);
  try {
    unit_normal(Surface::sphere(1), Vec3::Zero());
    FAIL("expected DegenerateGradient");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateGradient);
  }
}

TEST_CASE("names and semi-axes") {
  CHECK(Surface::oblate(0.8).name() == "oblate:0.8");
  CHECK(Surface::triaxial(1, 1.05, 1.1).name() == "triaxial:1,1.05,1.1");
  CHECK(*Surface::oblate(0.8).semi_axes() == Vec3(1, 1, 0.8));
  CHECK(!bumpy().semi_axes());
  CHECK(Surface::sphere(2).scale() == 2.0);
}

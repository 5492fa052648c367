#include "halfgeo/closed.hpp"
#include "halfgeo/jacobi.hpp"
#include "halfgeo/pathspace.hpp"
#include "halfgeo/sampling.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <numbers>

using namespace halfgeo;

namespace {

constexpr double pi = std::numbers::pi;

GeodesicPath great_circle(double length) { return shoot(Surface::sphere(1), Vec3(1, 0, 0), Vec3(0, 1, 0), length); }

}  // namespace

TEST_CASE("sphere conjugate points") {
  const Surface s = Surface::sphere(1);
  auto r = jacobi_index(s, great_circle(2.5));
  CHECK(r.index == 0);
  CHECK(r.conjugate_times.empty());

  r = jacobi_index(s, great_circle(3.2));
  REQUIRE(r.index == 1);
  CHECK(r.conjugate_times[0].t == doctest::Approx(pi).epsilon(1e-7));

  r = jacobi_index(s, great_circle(7.0));
  REQUIRE(r.index == 2);
  CHECK(r.conjugate_times[0].t == doctest::Approx(pi).epsilon(1e-7));
  CHECK(r.conjugate_times[1].t == doctest::Approx(2 * pi).epsilon(1e-7));
  CHECK(!r.tangential_zero_suspected);
}

TEST_CASE("Jacobi field on the unit sphere is sin t") {
  const auto path = great_circle(6.0);
  const auto j = jacobi_field(Surface::sphere(1), path);
  REQUIRE(j.size() == path.samples.size());
  for (std::size_t i = 0; i < j.size(); i += 97) CHECK(j[i] == doctest::Approx(std::sin(path.samples[i].t)).epsilon(1e-9));
}

TEST_CASE("oblate equator: constant curvature 1/c^2") {
  const Surface o = Surface::oblate(0.8);
  const auto eq = shoot(o, Vec3(1, 0, 0), Vec3(0, 1, 0), 2 * pi);
  const auto r = jacobi_index(o, eq);
  REQUIRE(r.index == 2);
  CHECK(r.conjugate_times[0].t == doctest::Approx(0.8 * pi).epsilon(1e-7));
  CHECK(r.conjugate_times[1].t == doctest::Approx(1.6 * pi).epsilon(1e-7));
  CHECK(discrete_hessian_index(o, eq, 400) == r.index);
}

TEST_CASE("conjugate radius") {
  const auto plan1 = direction_plan(Surface::sphere(1), 6, 3, 1);
  CHECK(conjugate_radius_estimate(Surface::sphere(1), plan1) == doctest::Approx(pi).epsilon(1e-3 / pi));
  const auto plan2 = direction_plan(Surface::sphere(2), 6, 3, 1);
  CHECK(std::abs(conjugate_radius_estimate(Surface::sphere(2), plan2) - 2 * pi) < 1e-2);
  const auto plan3 = direction_plan(Surface::oblate(0.8), 8, 4, 1);
  const double r = conjugate_radius_estimate(Surface::oblate(0.8), plan3);
  CHECK(r <= pi);
  // no conjugate point before pi / sqrt(max K) = 0.8 pi
  CHECK(r >= 0.8 * pi - 1e-6);
}

TEST_CASE("no conjugate point within max_length") {
  ConjugateRadiusOptions opts;
  opts.max_length = 2.0;
  const auto plan = direction_plan(Surface::sphere(1), 2, 2, 3);
  CHECK(conjugate_radius_estimate(Surface::sphere(1), plan, opts) == 2.0);
}

TEST_CASE("direction plans") {
  const Surface t = Surface::triaxial(1, 1.05, 1.1);
  const auto a = direction_plan(t, 5, 3, 42);
  const auto b = direction_plan(t, 5, 3, 42);
  const auto c = direction_plan(t, 5, 3, 43);
  REQUIRE(a.size() == 15);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].direction == b[i].direction);
    CHECK(std::abs(t.phi(a[i].point)) < 1e-12);
    CHECK(std::abs(a[i].direction.norm() - 1) < 1e-14);
    CHECK(std::abs(a[i].direction.dot(unit_normal(t, a[i].point))) < 1e-14);
    differs = differs || (a[i].direction - c[i].direction).norm() > 1e-6;
  }
  CHECK(differs);
  for (const auto& x : fibonacci_points(t, 50)) CHECK(std::abs(t.phi(x)) < 1e-12);
}

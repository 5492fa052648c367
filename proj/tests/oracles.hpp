#pragma once

// Independent reference values used by the tests.

#include "halfgeo/surface.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace oracle {

// Perimeter of the ellipse with semi-axes a, b by the complete elliptic
// integral of the second kind (independent of the library's quadrature).
inline double ellipse_perimeter(double a, double b) {
  if (a < b) std::swap(a, b);
  return 4.0 * a * std::comp_ellint_2(std::sqrt(1.0 - (b * b) / (a * a)));
}

inline std::vector<halfgeo::Surface> builtins() {
  return {halfgeo::Surface::sphere(1.0), halfgeo::Surface::oblate(0.8), halfgeo::Surface::triaxial(1.0, 1.05, 1.1)};
}

inline halfgeo::Vec3 random_point(const halfgeo::Surface& s, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return halfgeo::radial_project(s, halfgeo::Vec3(g(rng), g(rng), g(rng)));
}

inline halfgeo::Vec3 random_tangent(const halfgeo::Surface& s, const halfgeo::Vec3& p, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  for (;;) {
    const halfgeo::Vec3 v = halfgeo::tangent_project(s, p, halfgeo::Vec3(g(rng), g(rng), g(rng)));
    if (v.norm() > 1e-3) return v.normalized();
  }
}

}  // namespace oracle

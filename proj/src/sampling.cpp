#include "halfgeo/sampling.hpp"

#include "halfgeo/error.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace halfgeo {

std::vector<Vec3> fibonacci_points(const Surface& s, int count) {
  if (count <= 0) throw Error(ErrorCode::InvalidArgument, "fibonacci_points: count must be positive");
  std::vector<Vec3> out;
  out.reserve(count);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double a = golden * i;
    out.push_back(radial_project(s, Vec3(r * std::cos(a), r * std::sin(a), z)));
  }
  return out;
}

Vec3 tangent_at_angle(const Surface& s, const Vec3& p, double angle) {
  const TangentFrame f = tangent_frame(s, p);
  return (std::cos(angle) * f.e1 + std::sin(angle) * f.e2).normalized();
}

std::vector<DirectionSample> direction_plan(const Surface& s, int points, int directions, std::uint64_t seed) {
  if (directions <= 0) throw Error(ErrorCode::InvalidArgument, "direction_plan: directions must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<DirectionSample> plan;
  plan.reserve(static_cast<std::size_t>(points) * directions);
  for (const Vec3& p : fibonacci_points(s, points)) {
    const double offset = unit(rng);
    for (int j = 0; j < directions; ++j) {
      const double angle = 2.0 * std::numbers::pi * (j + offset) / directions;
      plan.push_back({p, tangent_at_angle(s, p, angle)});
    }
  }
  return plan;
}

}  // namespace halfgeo

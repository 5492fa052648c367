#pragma once

#include "halfgeo/surface.hpp"

#include <cstdint>
#include <vector>

namespace halfgeo {

/// Unit tangent vector at a surface point.
struct DirectionSample {
  Vec3 point;
  Vec3 direction;
};

/// Fibonacci-sphere directions projected radially onto the surface.
std::vector<Vec3> fibonacci_points(const Surface& s, int count);

/// `directions` unit tangents at each of `points` Fibonacci points. Angles are
/// evenly spaced with a per-point random offset drawn from `seed`.
std::vector<DirectionSample> direction_plan(const Surface& s, int points, int directions, std::uint64_t seed);

/// Unit tangent making `angle` with the first axis of tangent_frame(s, p).
Vec3 tangent_at_angle(const Surface& s, const Vec3& p, double angle);

}  // namespace halfgeo

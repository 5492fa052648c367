#pragma once

#include "halfgeo/geodesic.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace halfgeo {

struct ClosureTolerance {
  double position = 1e-8;  // times scale
  double velocity = 1e-6;
};

struct ClosureGap {
  double position = 0.0;
  double velocity = 0.0;
};

/// A geodesic that closes up after prime_length. path covers [0, prime_length].
struct ClosedGeodesic {
  GeodesicPath path;
  double prime_length = 0.0;
  double closure_residual = 0.0;  // position gap + velocity gap at t = prime_length
  ClosureGap gap;

  const Vec3& start() const { return path.start(); }
  const Vec3& direction() const { return path.direction(); }
};

/// Position and velocity gap after integrating (p, v) for `length`.
ClosureGap closure_gap(const Surface& s, const Vec3& p, const Vec3& v, double length, double step);

/// Shoots (p, v) for `length` and packages the result; throws NoConvergence if
/// the closure gap exceeds the tolerance.
ClosedGeodesic make_closed_geodesic(const Surface& s, const Vec3& p, const Vec3& v, double length, double step,
                                    const ClosureTolerance& tol = {});

enum class SectionPlane { X0, Y0, Z0 };
std::string_view to_string(SectionPlane plane);
SectionPlane parse_section_plane(std::string_view text);

/// Perimeter of the planar section {Phi = 0} n {x . normal = 0} by adaptive
/// Gauss-Kronrod quadrature of the polar parametrization. Requires a
/// star-shaped section.
double section_perimeter(const Surface& s, const Vec3& normal, double rel_tol = 1e-12);

/// The section through the origin orthogonal to `normal` as a closed geodesic.
/// Throws NotSymmetric unless reflection through that plane preserves Phi.
ClosedGeodesic plane_section_geodesic(const Surface& s, const Vec3& normal, double step = 0.0);

/// Coordinate-plane sections. The start point is the first in-plane axis
/// endpoint (y for X0, x for Y0 and Z0), heading toward the other in-plane axis.
ClosedGeodesic section_geodesic(const Surface& s, SectionPlane plane, double step = 0.0);

/// Smallest period: the largest k <= max_cover with closure after L / k.
double prime_length(const Surface& s, const ClosedGeodesic& cg, double tol, double step = 0.0, int max_cover = 8);

/// Cyclic polygon of surface points; the unit-interval parametrization gives
/// the discrete energy N * sum d(x_i, x_{i+1})^2.
struct DiscreteLoop {
  std::vector<Vec3> points;
};

/// Intrinsic length of a short segment: the chord corrected by the normal
/// curvature at its midpoint, c (1 + k^2 c^2 / 24).
double segment_length(const Surface& s, const Vec3& a, const Vec3& b);
double loop_length(const Surface& s, const DiscreteLoop& loop);
double loop_energy(const Surface& s, const DiscreteLoop& loop);

/// Discretized planar section with optional angular jitter (for seeding).
DiscreteLoop section_loop(const Surface& s, const Vec3& normal, int n, double jitter = 0.0, std::uint64_t seed = 0);

/// Latitude-style loop {z = height} for star-shaped surfaces.
DiscreteLoop latitude_loop(const Surface& s, double height, int n);

struct BirkhoffOptions {
  int max_passes = 200000;
  double tol = 1e-11;            // max point movement per pass, times scale
  double collapse_floor = 1e-2;  // loop length below floor * scale is a collapse
  double step = 0.0;             // integrator step for the verification shot
  ClosureTolerance closure;
};

struct Collapsed {
  int passes = 0;
  double final_length = 0.0;
};

struct BirkhoffTrace {
  int passes = 0;
  std::vector<double> lengths;  // discrete length after every pass
};

using BirkhoffResult = std::variant<ClosedGeodesic, Collapsed>;

/// Even/odd midpoint replacement until the loop stops moving, then closes the
/// result up as a geodesic by Levenberg-Marquardt on the closure map.
/// Throws NoConvergence when the pass budget is exhausted.
BirkhoffResult birkhoff_shorten(const Surface& s, DiscreteLoop loop, const BirkhoffOptions& opts = {},
                                BirkhoffTrace* trace = nullptr);

/// Refines (p, v, length) to a closed geodesic by Levenberg-Marquardt over a
/// transverse start offset, the start angle and the period.
ClosedGeodesic close_geodesic(const Surface& s, const Vec3& p, const Vec3& v, double length, double step,
                              const ClosureTolerance& tol = {});

/// JSON sidecar {prime_length, closure_residual}.
void write_sidecar(std::ostream& os, const ClosedGeodesic& cg);

}  // namespace halfgeo

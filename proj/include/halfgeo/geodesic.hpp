#pragma once

#include "halfgeo/surface.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace halfgeo {

struct GeodesicSample {
  double t = 0.0;  // arclength
  Vec3 x = Vec3::Zero();
  Vec3 v = Vec3::Zero();  // unit tangent
};

/// Arclength-sampled geodesic. samples.front() is (0, start, direction).
struct GeodesicPath {
  std::vector<GeodesicSample> samples;
  double speed_drift = 0.0;  // max per-step | |v| - 1 | before renormalization

  const Vec3& start() const { return samples.front().x; }
  const Vec3& direction() const { return samples.front().v; }
  double length() const { return samples.empty() ? 0.0 : samples.back().t; }
  const GeodesicSample& end() const { return samples.back(); }
};

struct ShootOptions {
  double step = 1e-3;              // absolute; callers usually pass 1e-3 * scale
  double drift_per_length = 1e-8;  // DriftExceeded above drift_per_length * max(1, length)
};

struct EndState {
  Vec3 x;
  Vec3 v;
  double speed_drift = 0.0;
};

/// Integrates x'' = lambda grad Phi, lambda = -(x'^T H x') / |grad Phi|^2 with
/// classical RK4 and per-step projection of position and velocity.
/// The step actually used is length / ceil(length / step).
GeodesicPath shoot(const Surface& s, const Vec3& p, const Vec3& v, double length, const ShootOptions& opts = {});

/// Same integration as shoot() but keeps only the final state.
EndState shoot_end(const Surface& s, const Vec3& p, const Vec3& v, double length, const ShootOptions& opts = {});

/// Reconstructs the state at arclength t by cubic Hermite interpolation
/// between samples followed by projection back to the surface. t is clamped
/// to [0, length].
GeodesicSample sample_at(const Surface& s, const GeodesicPath& path, double t);

/// Cyclic evaluation for closed geodesics: t is reduced modulo `period`.
GeodesicSample sample_periodic(const Surface& s, const GeodesicPath& path, double period, double t);

/// Unit-speed, tangent validation shared by every entry point that takes (p, v).
void require_unit_tangent(const Surface& s, const Vec3& p, const Vec3& v, const char* op);

/// CSV with header `t,x,y,z,vx,vy,vz`, 17 significant digits per value.
void write_csv(std::ostream& os, const GeodesicPath& path);
GeodesicPath read_csv(std::istream& is);
void write_csv_file(const std::string& filename, const GeodesicPath& path);
GeodesicPath read_csv_file(const std::string& filename);

}  // namespace halfgeo

#pragma once

#include "halfgeo/geodesic.hpp"
#include "halfgeo/mesh.hpp"
#include "halfgeo/sampling.hpp"

#include <cstdint>
#include <memory>
#include <string_view>

namespace halfgeo {

enum class DistanceMethod { MeshOracle, ShootingRefined };
std::string_view to_string(DistanceMethod m);

struct DistanceResult {
  double value = 0.0;
  DistanceMethod method = DistanceMethod::MeshOracle;
  double upper_bound = 0.0;
  double lower_bound = 0.0;
};

struct CutTimeSample {
  Vec3 base;
  Vec3 direction;
  double cut_time = 0.0;
  double lo = 0.0;  // minimizing up to here
  double hi = 0.0;  // not minimizing here
};

struct DistanceOptions {
  double step = 0.0;        // integrator step; 0 selects 1e-3 * scale
  double miss_tol = 1e-10;  // endpoint miss (times scale) accepted as a hit
  int max_iterations = 60;  // Levenberg-Marquardt iterations per seed
};

/// Two-tier intrinsic distance: a mesh graph oracle gives a certified upper
/// bound and the seed branch, then shooting on (angle, length) refines it.
/// Immutable after construction; all queries are safe to run concurrently.
class DistanceEngine {
 public:
  DistanceEngine(Surface surface, double h, DistanceOptions opts = {});
  DistanceEngine(Surface surface, std::shared_ptr<const SurfaceMesh> mesh, DistanceOptions opts = {});

  const Surface& surface() const { return surface_; }
  const SurfaceMesh& mesh() const { return *mesh_; }
  const DistanceOptions& options() const { return opts_; }
  double step() const { return opts_.step; }

  /// Graph distance between two mesh vertices with the distortion bracket.
  DistanceResult mesh_distance(int p, int q) const;

  /// Mesh bound between arbitrary surface points, snapping both to their
  /// nearest vertices.
  DistanceResult mesh_distance(const Vec3& p, const Vec3& q) const;

  DistanceResult distance(const Vec3& p, const Vec3& q) const;

  /// Bisection on t of d(p, gamma_v(t)) >= t - tol.
  CutTimeSample cut_time(const Vec3& p, const Vec3& v, double tol) const;

  /// Upper bound on max_q d(p, q) from the mesh.
  double eccentricity_bound(const Vec3& p) const;

 private:
  struct Shot {
    bool converged = false;
    double length = 0.0;
  };
  Shot solve_bvp(const Vec3& p, const Vec3& q, const Vec3& dir0, double len0) const;
  double snap_bound(const Vec3& x, int vertex) const;

  Surface surface_;
  std::shared_ptr<const SurfaceMesh> mesh_;
  DistanceOptions opts_;
};

enum class BlaschkeVerdict { Blaschke, NotBlaschke, Inconclusive };
std::string_view to_string(BlaschkeVerdict v);

struct ScanPlan {
  int point_samples = 16;
  int direction_samples = 4;
  int diameter_points = 120;
  int refine_pairs = 3;
  double cut_tol = 1e-3;          // times scale
  double verdict_rel_tol = 5e-3;  // times diameter
  std::uint64_t seed = 1;
  int jobs = 1;
  /// Lengths of closed geodesics known on the surface; half the shortest
  /// caps the injectivity radius.
  std::vector<double> closed_geodesic_lengths;
};

struct ScanReport {
  double diameter_est = 0.0;
  Vec3 diameter_p = Vec3::Zero();
  Vec3 diameter_q = Vec3::Zero();
  double inj_est = 0.0;
  double cut_time_min = 0.0;
  double cut_time_max = 0.0;
  double cut_time_mean = 0.0;
  std::size_t cut_time_count = 0;
  double conjugate_radius = 0.0;
  double half_shortest_closed = 0.0;  // infinity when no closed geodesic was supplied
  BlaschkeVerdict verdict = BlaschkeVerdict::Inconclusive;
  double tol = 0.0;
};

/// Diameter and injectivity radius estimates and the Blaschke verdict.
ScanReport scan(const DistanceEngine& engine, const ScanPlan& plan);

/// Local maximization of d(p, q) by alternating pattern search on q and p.
double maximize_distance(const DistanceEngine& engine, Vec3& p, Vec3& q, double initial_step, double final_step);

}  // namespace halfgeo

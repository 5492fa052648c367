#pragma once

#include "halfgeo/geodesic.hpp"
#include "halfgeo/sampling.hpp"

#include <vector>

namespace halfgeo {

struct ConjugatePoint {
  double t = 0.0;
  int multiplicity = 1;  // always 1 on a surface
};

/// Conjugate points to path.start() along the path and the resulting index.
struct IndexReport {
  std::vector<ConjugatePoint> conjugate_times;
  int index = 0;
  // A zero where |J'| is tiny relative to max |J'| could be a double zero
  // that the sign-change scan cannot see. Flagged, never counted.
  bool tangential_zero_suspected = false;
};

struct JacobiOptions {
  double bisection_tol = 1e-8;
};

/// Integrates J'' + K(gamma(t)) J = 0, J(0) = 0, J'(0) = 1 on the path's
/// sample grid and locates the zeros of J in (0, length).
IndexReport jacobi_index(const Surface& s, const GeodesicPath& path, const JacobiOptions& opts = {});

/// Jacobi field values J(t_i) on the path's sample grid.
std::vector<double> jacobi_field(const Surface& s, const GeodesicPath& path);

struct ConjugateRadiusOptions {
  double max_length = 0.0;  // 0 selects 2 pi * scale
  double step = 0.0;        // 0 selects 1e-3 * scale
  int jobs = 1;
};

/// Minimum over the plan of the first conjugate time; max_length if a sampled
/// geodesic has no conjugate point within it.
double conjugate_radius_estimate(const Surface& s, const std::vector<DirectionSample>& plan,
                                 const ConjugateRadiusOptions& opts = {});

}  // namespace halfgeo

#pragma once

#include "halfgeo/geodesic.hpp"

#include <vector>

namespace halfgeo {

/// A broken path c: [0, 1] -> M sampled at parameters times[0] = 0 < ... <
/// times[N] = 1, with the intrinsic length of each segment. The uniform grid
/// times[i] = i / N is the default; concatenation produces non-uniform grids.
///
/// Discrete length and energy are
///   L = sum l_i,   E = sum l_i^2 / (t_{i+1} - t_i),
/// so on the uniform grid E = N sum l_i^2 and L^2 <= E by Cauchy-Schwarz with
/// equality exactly when every l_i / dt_i is the same.
class DiscretePath {
 public:
  /// Uniform grid, segment lengths given directly. Points may be empty.
  static DiscretePath from_lengths(std::vector<double> lengths);

  /// Uniform grid, segment lengths from segment_length() on the surface.
  static DiscretePath from_points(const Surface& s, std::vector<Vec3> points);

  /// N uniform segments along a geodesic; segment lengths are the arclength
  /// increments, which are the intrinsic distances for short segments.
  static DiscretePath from_geodesic(const Surface& s, const GeodesicPath& path, int segments);

  /// General constructor. Validates N >= 1, increasing grid on [0, 1],
  /// nonnegative lengths and matching point count when points are given.
  DiscretePath(std::vector<double> times, std::vector<double> lengths, std::vector<Vec3> points = {});

  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& lengths() const { return lengths_; }
  const std::vector<Vec3>& points() const { return points_; }
  std::size_t segments() const { return lengths_.size(); }

  double length() const;
  double energy() const;

  /// True when every segment has the same speed l_i / dt_i to relative tol.
  bool constant_speed(double rel_tol = 1e-12) const;

 private:
  std::vector<double> times_;
  std::vector<double> lengths_;
  std::vector<Vec3> points_;
};

/// tau * c: runs c on [0, 1 - eps] and the constant-speed tail on
/// [1 - eps, 1]. The tail must be a constant-speed path of length eps so
/// that, rescaled to [0, eps], it has unit speed. Then
///   E(tau * c) = E(c) / (1 - eps) + eps
/// holds exactly for the discrete energy.
/// Throws EpsilonOutOfRange unless 0 < eps < 1, InvalidArgument if the tail
/// length or speed does not match eps or the endpoints disagree.
DiscretePath concatenate(const DiscretePath& path, const DiscretePath& tail, double eps);

/// Continuum right-hand side E / (1 - eps) + eps.
double concatenated_energy(double energy, double eps);

/// Negative-eigenvalue count of the second variation of discrete energy for
/// normal variations along a geodesic with fixed endpoints:
///   Q(w) = sum (w_{i+1} - w_i)^2 / dt - l^2 sum dt K_{i+1/2} (w_i^2 + w_{i+1}^2) / 2
/// over the N - 1 interior nodes, counted by the inertia of an LDL^T
/// factorization of the tridiagonal matrix.
int discrete_hessian_index(const Surface& s, const GeodesicPath& path, int segments);

/// Inertia of a symmetric tridiagonal matrix: number of negative eigenvalues.
int tridiagonal_negative_count(const std::vector<double>& diag, const std::vector<double>& off);

}  // namespace halfgeo

#include "halfgeo/pathspace.hpp"

#include "halfgeo/closed.hpp"
#include "halfgeo/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace halfgeo {

namespace {

std::vector<double> uniform_grid(std::size_t n) {
  std::vector<double> t(n + 1);
  for (std::size_t i = 0; i <= n; ++i) t[i] = static_cast<double>(i) / static_cast<double>(n);
  t.back() = 1.0;
  return t;
}

}  // namespace

DiscretePath::DiscretePath(std::vector<double> times, std::vector<double> lengths, std::vector<Vec3> points)
    : times_(std::move(times)), lengths_(std::move(lengths)), points_(std::move(points)) {
  if (lengths_.empty()) throw Error(ErrorCode::InvalidArgument, "DiscretePath: needs at least one segment");
  if (times_.size() != lengths_.size() + 1) throw Error(ErrorCode::InvalidArgument, "DiscretePath: grid size mismatch");
  if (!points_.empty() && points_.size() != times_.size()) {
    throw Error(ErrorCode::InvalidArgument, "DiscretePath: point count does not match the grid");
  }
  if (times_.front() != 0.0 || times_.back() != 1.0) {
    throw Error(ErrorCode::InvalidArgument, "DiscretePath: grid must span [0, 1]");
  }
  for (std::size_t i = 0; i + 1 < times_.size(); ++i) {
    if (!(times_[i + 1] > times_[i])) throw Error(ErrorCode::InvalidArgument, "DiscretePath: grid not increasing");
  }
  for (double l : lengths_) {
    if (!(l >= 0.0) || !std::isfinite(l)) throw Error(ErrorCode::InvalidArgument, "DiscretePath: bad segment length");
  }
}

DiscretePath DiscretePath::from_lengths(std::vector<double> lengths) {
  auto grid = uniform_grid(lengths.size());
  return DiscretePath(std::move(grid), std::move(lengths));
}

DiscretePath DiscretePath::from_points(const Surface& s, std::vector<Vec3> points) {
  if (points.size() < 2) throw Error(ErrorCode::InvalidArgument, "DiscretePath: needs at least two points");
  std::vector<double> lengths(points.size() - 1);
  for (std::size_t i = 0; i + 1 < points.size(); ++i) lengths[i] = segment_length(s, points[i], points[i + 1]);
  auto grid = uniform_grid(lengths.size());
  return DiscretePath(std::move(grid), std::move(lengths), std::move(points));
}

DiscretePath DiscretePath::from_geodesic(const Surface& s, const GeodesicPath& path, int segments) {
  if (segments < 1) throw Error(ErrorCode::InvalidArgument, "DiscretePath: segments must be positive");
  const double L = path.length();
  std::vector<Vec3> points;
  std::vector<double> arc(segments + 1);
  for (int i = 0; i <= segments; ++i) {
    arc[i] = i == segments ? L : L * i / segments;
    points.push_back(sample_at(s, path, arc[i]).x);
  }
  std::vector<double> lengths(segments);
  for (int i = 0; i < segments; ++i) lengths[i] = arc[i + 1] - arc[i];
  return DiscretePath(uniform_grid(segments), std::move(lengths), std::move(points));
}

double DiscretePath::length() const { return std::accumulate(lengths_.begin(), lengths_.end(), 0.0); }

double DiscretePath::energy() const {
  double e = 0.0;
  for (std::size_t i = 0; i < lengths_.size(); ++i) e += lengths_[i] * lengths_[i] / (times_[i + 1] - times_[i]);
  return e;
}

bool DiscretePath::constant_speed(double rel_tol) const {
  const double ref = lengths_.front() / (times_[1] - times_[0]);
  for (std::size_t i = 0; i < lengths_.size(); ++i) {
    const double speed = lengths_[i] / (times_[i + 1] - times_[i]);
    if (std::abs(speed - ref) > rel_tol * std::max(std::abs(ref), 1e-300)) return false;
  }
  return true;
}

double concatenated_energy(double energy, double eps) { return energy / (1.0 - eps) + eps; }

DiscretePath concatenate(const DiscretePath& path, const DiscretePath& tail, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorCode::EpsilonOutOfRange, "concatenate: eps must lie in (0, 1)");
  if (std::abs(tail.length() - eps) > 1e-12 * std::max(1.0, eps)) {
    throw Error(ErrorCode::InvalidArgument, "concatenate: tail length must equal eps");
  }
  if (!tail.constant_speed(1e-9)) throw Error(ErrorCode::InvalidArgument, "concatenate: tail must have constant speed");
  const bool with_points = !path.points().empty() && !tail.points().empty();
  if (with_points && (path.points().back() - tail.points().front()).norm() > 1e-9) {
    throw Error(ErrorCode::InvalidArgument, "concatenate: tail does not start at the path endpoint");
  }

  std::vector<double> times;
  std::vector<double> lengths;
  std::vector<Vec3> points;
  for (double t : path.times()) times.push_back(t * (1.0 - eps));
  for (std::size_t j = 1; j < tail.times().size(); ++j) times.push_back((1.0 - eps) + eps * tail.times()[j]);
  times.back() = 1.0;
  lengths = path.lengths();
  lengths.insert(lengths.end(), tail.lengths().begin(), tail.lengths().end());
  if (with_points) {
    points = path.points();
    points.insert(points.end(), tail.points().begin() + 1, tail.points().end());
  }
  return DiscretePath(std::move(times), std::move(lengths), std::move(points));
}

int tridiagonal_negative_count(const std::vector<double>& diag, const std::vector<double>& off) {
  if (diag.empty()) return 0;
  if (off.size() + 1 != diag.size()) throw Error(ErrorCode::InvalidArgument, "tridiagonal: size mismatch");
  int negatives = 0;
  double pivot = diag[0];
  const double tiny = 1e-300;
  for (std::size_t i = 0;; ++i) {
    if (pivot == 0.0) pivot = -tiny;
    if (pivot < 0.0) ++negatives;
    if (i + 1 == diag.size()) break;
    pivot = diag[i + 1] - off[i] * off[i] / pivot;
  }
  return negatives;
}

int discrete_hessian_index(const Surface& s, const GeodesicPath& path, int segments) {
  if (segments < 2) throw Error(ErrorCode::InvalidArgument, "discrete_hessian_index: needs N >= 2");
  const double L = path.length();
  const double dt = 1.0 / segments;
  std::vector<double> k_mid(segments);
  for (int i = 0; i < segments; ++i) k_mid[i] = gauss_curvature(s, sample_at(s, path, L * (i + 0.5) * dt).x);
  std::vector<double> diag(segments - 1), off(segments - 2 > 0 ? segments - 2 : 0, -1.0 / dt);
  for (int j = 1; j < segments; ++j) {
    diag[j - 1] = 2.0 / dt - L * L * dt * 0.5 * (k_mid[j - 1] + k_mid[j]);
  }
  return tridiagonal_negative_count(diag, off);
}

}  // namespace halfgeo

#include "halfgeo/closed.hpp"

#include "halfgeo/error.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>

namespace halfgeo {

namespace {

double default_step(const Surface& s, double step) { return step > 0.0 ? step : 1e-3 * s.scale(); }

ShootOptions shoot_options(double step) {
  ShootOptions so;
  so.step = step;
  return so;
}

// In-plane orthonormal basis (u1, u2) for the plane through the origin with
// the given normal. Coordinate planes get their axis-aligned basis.
std::pair<Vec3, Vec3> plane_basis(const Vec3& normal) {
  const Vec3 n = normal.normalized();
  Eigen::Index axis = 0;
  n.cwiseAbs().maxCoeff(&axis);
  if (std::abs(n[axis]) > 1.0 - 1e-15) {
    switch (axis) {
      case 0: return {Vec3::UnitY(), Vec3::UnitZ()};
      case 1: return {Vec3::UnitX(), Vec3::UnitZ()};
      default: return {Vec3::UnitX(), Vec3::UnitY()};
    }
  }
  Eigen::Index least = 0;
  n.cwiseAbs().minCoeff(&least);
  Vec3 u1 = Vec3::Unit(least) - n[least] * n;
  u1.normalize();
  return {u1, n.cross(u1)};
}

bool reflection_symmetric(const Surface& s, const Vec3& normal) {
  const Vec3 n = normal.normalized();
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  const int count = 64;
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / count;
    const double r = std::sqrt(1.0 - z * z);
    const Vec3 u(r * std::cos(golden * i), r * std::sin(golden * i), z);
    for (double radius : {0.37, 0.81, 1.0, 1.29}) {
      const Vec3 x = radius * s.scale() * u;
      const Vec3 rx = x - 2.0 * x.dot(n) * n;
      const double a = s.phi(x), b = s.phi(rx);
      if (std::abs(a - b) > 1e-10 * (1.0 + std::abs(a))) return false;
    }
  }
  return true;
}

}  // namespace

std::string_view to_string(SectionPlane plane) {
  switch (plane) {
    case SectionPlane::X0: return "x0";
    case SectionPlane::Y0: return "y0";
    case SectionPlane::Z0: return "z0";
  }
  return "z0";
}

SectionPlane parse_section_plane(std::string_view text) {
  if (text == "x0" || text == "X0") return SectionPlane::X0;
  if (text == "y0" || text == "Y0") return SectionPlane::Y0;
  if (text == "z0" || text == "Z0") return SectionPlane::Z0;
  throw Error(ErrorCode::InvalidArgument, "unknown section plane '" + std::string(text) + "' (expected x0, y0 or z0)");
}

ClosureGap closure_gap(const Surface& s, const Vec3& p, const Vec3& v, double length, double step) {
  const EndState e = shoot_end(s, p, v, length, shoot_options(default_step(s, step)));
  return {(e.x - p).norm(), (e.v - v).norm()};
}

ClosedGeodesic make_closed_geodesic(const Surface& s, const Vec3& p, const Vec3& v, double length, double step,
                                    const ClosureTolerance& tol) {
  if (!(length > 0.0)) throw Error(ErrorCode::InvalidArgument, "closed geodesic length must be positive");
  ClosedGeodesic cg;
  cg.path = shoot(s, p, v, length, shoot_options(default_step(s, step)));
  cg.prime_length = length;
  cg.gap = {(cg.path.end().x - p).norm(), (cg.path.end().v - v).norm()};
  cg.closure_residual = cg.gap.position + cg.gap.velocity;
  if (cg.gap.position > tol.position * s.scale() || cg.gap.velocity > tol.velocity) {
    throw Error(ErrorCode::NoConvergence, "closed geodesic does not close within tolerance (position gap " +
                                              std::to_string(cg.gap.position) + ", velocity gap " +
                                              std::to_string(cg.gap.velocity) + ")");
  }
  return cg;
}

double section_perimeter(const Surface& s, const Vec3& normal, double rel_tol) {
  const auto [u1, u2] = plane_basis(normal);
  auto speed = [&](double theta) {
    const Vec3 w = std::cos(theta) * u1 + std::sin(theta) * u2;
    const Vec3 dw = -std::sin(theta) * u1 + std::cos(theta) * u2;
    const Vec3 c = radial_project(s, w);
    const double r = c.norm();
    const Vec3 g = s.grad(c);
    const double dr = -r * g.dot(dw) / g.dot(w);
    return std::sqrt(r * r + dr * dr);
  };
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      speed, 0.0, 2.0 * std::numbers::pi, 20, rel_tol, &error);
  return value;
}

ClosedGeodesic plane_section_geodesic(const Surface& s, const Vec3& normal, double step) {
  if (!(normal.norm() > 0.0)) throw Error(ErrorCode::InvalidArgument, "section plane normal must be nonzero");
  if (!reflection_symmetric(s, normal)) {
    throw Error(ErrorCode::NotSymmetric, "surface is not symmetric under reflection through the section plane");
  }
  const Vec3 n = normal.normalized();
  const auto [u1, u2] = plane_basis(n);
  const Vec3 start = radial_project(s, u1);
  Vec3 tangent = n.cross(unit_normal(s, start)).normalized();
  if (tangent.dot(u2) < 0.0) tangent = -tangent;
  const double length = section_perimeter(s, n);
  return make_closed_geodesic(s, start, tangent, length, step);
}

ClosedGeodesic section_geodesic(const Surface& s, SectionPlane plane, double step) {
  switch (plane) {
    case SectionPlane::X0: return plane_section_geodesic(s, Vec3::UnitX(), step);
    case SectionPlane::Y0: return plane_section_geodesic(s, Vec3::UnitY(), step);
    case SectionPlane::Z0: return plane_section_geodesic(s, Vec3::UnitZ(), step);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown section plane");
}

double prime_length(const Surface& s, const ClosedGeodesic& cg, double tol, double step, int max_cover) {
  const double L = cg.prime_length > 0.0 ? cg.prime_length : cg.path.length();
  for (int k = std::max(1, max_cover); k >= 1; --k) {
    const ClosureGap gap = closure_gap(s, cg.start(), cg.direction(), L / k, step);
    if (gap.position <= tol * s.scale() && gap.velocity <= tol) return L / k;
  }
  return L;
}

double segment_length(const Surface& s, const Vec3& a, const Vec3& b) {
  const Vec3 d = b - a;
  const double c = d.norm();
  if (c == 0.0) return 0.0;
  const Vec3 m = retract(s, 0.5 * (a + b));
  const Vec3 t = tangent_project(s, m, d);
  const double tn = t.norm();
  if (tn == 0.0) return c;
  const double k = normal_curvature(s, m, t / tn);
  return c * (1.0 + k * k * c * c / 24.0);
}

double loop_length(const Surface& s, const DiscreteLoop& loop) {
  const auto& p = loop.points;
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) total += segment_length(s, p[i], p[(i + 1) % p.size()]);
  return total;
}

double loop_energy(const Surface& s, const DiscreteLoop& loop) {
  const auto& p = loop.points;
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double l = segment_length(s, p[i], p[(i + 1) % p.size()]);
    sum += l * l;
  }
  return static_cast<double>(p.size()) * sum;
}

DiscreteLoop section_loop(const Surface& s, const Vec3& normal, int n, double jitter, std::uint64_t seed) {
  if (n < 8) throw Error(ErrorCode::InvalidArgument, "loops need at least 8 points");
  const auto [u1, u2] = plane_basis(normal);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> offset(-0.5, 0.5);
  DiscreteLoop loop;
  for (int i = 0; i < n; ++i) {
    const double theta = 2.0 * std::numbers::pi * (i + jitter * offset(rng)) / n;
    loop.points.push_back(radial_project(s, std::cos(theta) * u1 + std::sin(theta) * u2));
  }
  return loop;
}

DiscreteLoop latitude_loop(const Surface& s, double height, int n) {
  if (n < 8) throw Error(ErrorCode::InvalidArgument, "loops need at least 8 points");
  // Radius of the level circle by bisection on Phi along the horizontal ray.
  auto ring_point = [&](double theta) {
    const Vec3 dir(std::cos(theta), std::sin(theta), 0.0);
    double lo = 0.0, hi = 2.0 * s.scale();
    if (s.phi(Vec3(0, 0, height)) >= 0.0) throw Error(ErrorCode::InvalidArgument, "latitude height outside the surface");
    for (int it = 0; it < 200 && hi - lo > 1e-15 * s.scale(); ++it) {
      const double mid = 0.5 * (lo + hi);
      (s.phi(mid * dir + Vec3(0, 0, height)) < 0.0 ? lo : hi) = mid;
    }
    return retract(s, 0.5 * (lo + hi) * dir + Vec3(0, 0, height));
  };
  DiscreteLoop loop;
  for (int i = 0; i < n; ++i) loop.points.push_back(ring_point(2.0 * std::numbers::pi * i / n));
  return loop;
}

ClosedGeodesic close_geodesic(const Surface& s, const Vec3& p, const Vec3& v, double length, double step,
                              const ClosureTolerance& tol) {
  step = default_step(s, step);
  const Vec3 base = retract(s, p);
  const Vec3 t0 = tangent_project(s, base, v).normalized();
  const Vec3 n0 = unit_normal(s, base).cross(t0);

  struct Start {
    Vec3 x;
    Vec3 v;
  };
  auto start_of = [&](const Eigen::Vector3d& u) {
    const Vec3 x = retract(s, base + u[0] * n0);
    const Vec3 t = tangent_project(s, x, t0).normalized();
    const Vec3 n = unit_normal(s, x).cross(t);
    return Start{x, (std::cos(u[1]) * t + std::sin(u[1]) * n).normalized()};
  };
  using Vec6 = Eigen::Matrix<double, 6, 1>;
  auto residual = [&](const Eigen::Vector3d& u) {
    const Start st = start_of(u);
    const EndState e = shoot_end(s, st.x, st.v, u[2], shoot_options(step));
    Vec6 r;
    r.head<3>() = (e.x - st.x) / s.scale();
    r.tail<3>() = e.v - st.v;
    return r;
  };
  auto done = [&](const Vec6& r) {
    return r.head<3>().norm() <= 0.1 * tol.position && r.tail<3>().norm() <= 0.1 * tol.velocity;
  };

  Eigen::Vector3d u(0.0, 0.0, length);
  Vec6 r = residual(u);
  double lambda = 1e-3;
  for (int it = 0; it < 60 && !done(r); ++it) {
    Eigen::Matrix<double, 6, 3> J;
    for (int k = 0; k < 3; ++k) {
      Eigen::Vector3d du = Eigen::Vector3d::Zero();
      du[k] = k == 2 ? 1e-7 * s.scale() : 1e-7;
      J.col(k) = (residual(u + du) - r) / du[k];
    }
    const Eigen::Matrix3d A = J.transpose() * J;
    const Eigen::Vector3d g = J.transpose() * r;
    bool accepted = false;
    while (!accepted && lambda < 1e10) {
      Eigen::Matrix3d M = A;
      for (int k = 0; k < 3; ++k) M(k, k) += lambda * A(k, k) + 1e-16;
      const Eigen::Vector3d d = M.ldlt().solve(-g);
      const Vec6 trial = residual(u + d);
      if (trial.norm() < r.norm()) {
        u += d;
        r = trial;
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
      } else {
        lambda *= 4.0;
      }
    }
    if (!accepted) break;
  }
  const Start st = start_of(u);
  return make_closed_geodesic(s, st.x, st.v, u[2], step, tol);
}

BirkhoffResult birkhoff_shorten(const Surface& s, DiscreteLoop loop, const BirkhoffOptions& opts,
                                BirkhoffTrace* trace) {
  auto& pts = loop.points;
  if (pts.size() < 8 || pts.size() % 2 != 0) {
    throw Error(ErrorCode::InvalidArgument, "birkhoff_shorten: loop needs an even number (>= 8) of points");
  }
  for (const auto& p : pts) {
    if (std::abs(s.phi(p)) > 1e-9 * s.scale()) {
      throw Error(ErrorCode::InvalidArgument, "birkhoff_shorten: loop point off the surface");
    }
  }
  const double scale = s.scale();
  const double max_segment = 0.1 * scale;
  auto refine = [&] {
    bool long_segment = true;
    while (long_segment) {
      long_segment = false;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if ((pts[(i + 1) % pts.size()] - pts[i]).norm() > max_segment) long_segment = true;
      }
      if (!long_segment) break;
      std::vector<Vec3> doubled;
      doubled.reserve(2 * pts.size());
      for (std::size_t i = 0; i < pts.size(); ++i) {
        doubled.push_back(pts[i]);
        doubled.push_back(retract(s, 0.5 * (pts[i] + pts[(i + 1) % pts.size()])));
      }
      pts = std::move(doubled);
    }
  };
  refine();

  const std::size_t n = pts.size();
  std::vector<Vec3> replacement(n);
  for (int pass = 1; pass <= opts.max_passes; ++pass) {
    double moved = 0.0;
    for (std::size_t parity = 0; parity < 2; ++parity) {
      // Midpoints within one parity class do not interact.
      for (std::size_t i = parity; i < n; i += 2) {
        const Vec3& a = pts[(i + n - 1) % n];
        const Vec3& b = pts[(i + 1) % n];
        const Vec3 m = retract(s, 0.5 * (a + b));
        const double before = segment_length(s, a, pts[i]) + segment_length(s, pts[i], b);
        const double after = segment_length(s, a, m) + segment_length(s, m, b);
        replacement[i] = after <= before ? m : pts[i];
      }
      for (std::size_t i = parity; i < n; i += 2) {
        moved = std::max(moved, (replacement[i] - pts[i]).norm());
        pts[i] = replacement[i];
      }
    }
    const double length = loop_length(s, loop);
    if (trace) {
      trace->passes = pass;
      trace->lengths.push_back(length);
    }
    if (length < opts.collapse_floor * scale) return Collapsed{pass, length};
    if (moved < opts.tol * scale) {
      const Vec3 tangent = tangent_project(s, pts[0], pts[1] - pts[n - 1]).normalized();
      return close_geodesic(s, pts[0], tangent, length, default_step(s, opts.step), opts.closure);
    }
  }
  throw Error(ErrorCode::NoConvergence, "birkhoff_shorten: pass budget exhausted");
}

void write_sidecar(std::ostream& os, const ClosedGeodesic& cg) {
  nlohmann::ordered_json j;
  j["prime_length"] = cg.prime_length;
  j["closure_residual"] = cg.closure_residual;
  os << j.dump(2) << '\n';
}

}  // namespace halfgeo

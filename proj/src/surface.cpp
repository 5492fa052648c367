#include "halfgeo/surface.hpp"

#include "halfgeo/error.hpp"

#include <Eigen/Dense>

#include <charconv>
#include <cmath>
#include <sstream>

namespace halfgeo {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::DegenerateGradient: return "DegenerateGradient";
    case ErrorCode::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorCode::DriftExceeded: return "DriftExceeded";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::BVPNonConvergence: return "BVPNonConvergence";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::EpsilonOutOfRange: return "EpsilonOutOfRange";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

namespace {

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

// Shortest decimal that round-trips.
std::string num(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string default_name(const SurfaceKind& kind) {
  std::ostringstream os;
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Sphere>) {
          os << "sphere:" << num(k.radius);
        } else if constexpr (std::is_same_v<T, TriaxialEllipsoid>) {
          os << "triaxial:" << num(k.a) << ',' << num(k.b) << ',' << num(k.c);
        } else if constexpr (std::is_same_v<T, OblateEllipsoid>) {
          os << "oblate:" << num(k.c);
        } else {
          os << "custom";
        }
      },
      kind);
  return os.str();
}

}  // namespace

Surface::Surface(SurfaceKind kind, std::string name) : kind_(std::move(kind)), name_(std::move(name)) {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be a positive real");
    }
  };
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Sphere>) {
          positive(k.radius, "sphere radius");
          const double w = 1.0 / (k.radius * k.radius);
          quadric_ = Vec3(w, w, w);
          scale_ = k.radius;
        } else if constexpr (std::is_same_v<T, TriaxialEllipsoid>) {
          positive(k.a, "semi-axis a");
          positive(k.b, "semi-axis b");
          positive(k.c, "semi-axis c");
          quadric_ = Vec3(1.0 / (k.a * k.a), 1.0 / (k.b * k.b), 1.0 / (k.c * k.c));
          scale_ = std::max({k.a, k.b, k.c});
        } else if constexpr (std::is_same_v<T, OblateEllipsoid>) {
          if (!(k.c > 0.0 && k.c < 1.0)) {
            throw Error(ErrorCode::InvalidArgument, "oblate c must lie in (0, 1)");
          }
          quadric_ = Vec3(1.0, 1.0, 1.0 / (k.c * k.c));
          scale_ = 1.0;
        } else {
          if (k.terms.empty()) throw Error(ErrorCode::InvalidArgument, "custom surface has no terms");
          for (const auto& t : k.terms) {
            if (t.px < 0 || t.py < 0 || t.pz < 0) {
              throw Error(ErrorCode::InvalidArgument, "custom surface exponents must be nonnegative");
            }
          }
          positive(k.scale, "custom surface scale");
          scale_ = k.scale;
        }
      },
      kind_);
  if (name_.empty()) name_ = default_name(kind_);
}

Surface Surface::sphere(double radius) { return Surface(Sphere{radius}); }
Surface Surface::triaxial(double a, double b, double c) { return Surface(TriaxialEllipsoid{a, b, c}); }
Surface Surface::oblate(double c) { return Surface(OblateEllipsoid{c}); }

std::optional<Vec3> Surface::semi_axes() const {
  if (!quadric_) return std::nullopt;
  return quadric_->cwiseSqrt().cwiseInverse();
}

double Surface::phi(const Vec3& x) const {
  if (quadric_) return quadric_->dot(x.cwiseProduct(x)) - 1.0;
  const auto& k = std::get<CustomImplicit>(kind_);
  double v = 0.0;
  for (const auto& t : k.terms) v += t.coeff * ipow(x[0], t.px) * ipow(x[1], t.py) * ipow(x[2], t.pz);
  return v;
}

Vec3 Surface::grad(const Vec3& x) const {
  if (quadric_) return 2.0 * quadric_->cwiseProduct(x);
  const auto& k = std::get<CustomImplicit>(kind_);
  Vec3 g = Vec3::Zero();
  for (const auto& t : k.terms) {
    const double fx = ipow(x[0], t.px), fy = ipow(x[1], t.py), fz = ipow(x[2], t.pz);
    if (t.px > 0) g[0] += t.coeff * t.px * ipow(x[0], t.px - 1) * fy * fz;
    if (t.py > 0) g[1] += t.coeff * t.py * fx * ipow(x[1], t.py - 1) * fz;
    if (t.pz > 0) g[2] += t.coeff * t.pz * fx * fy * ipow(x[2], t.pz - 1);
  }
  return g;
}

Mat3 Surface::hess(const Vec3& x) const {
  if (quadric_) return (2.0 * *quadric_).asDiagonal();
  const auto& k = std::get<CustomImplicit>(kind_);
  Mat3 h = Mat3::Zero();
  for (const auto& t : k.terms) {
    const int p[3] = {t.px, t.py, t.pz};
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        double term = t.coeff;
        for (int m = 0; m < 3; ++m) {
          int e = p[m];
          double factor = 1.0;
          if (m == i) {
            factor *= e;
            --e;
          }
          if (m == j) {
            factor *= e;
            --e;
          }
          if (e < 0) {
            term = 0.0;
            break;
          }
          term *= factor * ipow(x[m], e);
        }
        h(i, j) += term;
      }
    }
  }
  h(1, 0) = h(0, 1);
  h(2, 0) = h(0, 2);
  h(2, 1) = h(1, 2);
  return h;
}

Vec3 retract(const Surface& s, const Vec3& x, const ProjectionOptions& opts) {
  const double tol = opts.tolerance * s.scale();
  Vec3 y = x;
  for (int it = 0; it < opts.max_iterations; ++it) {
    const double f = s.phi(y);
    if (std::abs(f) <= tol) return y;
    const Vec3 g = s.grad(y);
    const double g2 = g.squaredNorm();
    if (g2 < s.gradient_floor() * s.gradient_floor()) {
      throw Error(ErrorCode::DegenerateGradient, "retract: gradient vanishes during projection");
    }
    y -= (f / g2) * g;
  }
  if (std::abs(s.phi(y)) <= tol) return y;
  throw Error(ErrorCode::NonConvergence, "retract: Newton iteration did not reach the surface");
}

Vec3 project_to_surface(const Surface& s, const Vec3& x, const ProjectionOptions& opts) {
  Vec3 y = retract(s, x, opts);
  Vec3 g = s.grad(y);
  double mu = (x - y).dot(g) / g.squaredNorm();
  const double tol = opts.tolerance * s.scale();

  // Newton on the stationarity system y - x + mu grad(y) = 0, Phi(y) = 0.
  using Mat4 = Eigen::Matrix4d;
  using Vec4 = Eigen::Vector4d;
  for (int it = 0; it < opts.max_iterations; ++it) {
    g = s.grad(y);
    Vec4 F;
    F.head<3>() = y - x + mu * g;
    F[3] = s.phi(y);
    if (F.head<3>().norm() <= 1e-14 * (1.0 + x.norm()) && std::abs(F[3]) <= tol) break;
    Mat4 J = Mat4::Zero();
    J.topLeftCorner<3, 3>() = Mat3::Identity() + mu * s.hess(y);
    J.topRightCorner<3, 1>() = g;
    J.bottomLeftCorner<1, 3>() = g.transpose();
    const Vec4 delta = J.partialPivLu().solve(-F);
    if (!delta.allFinite()) break;
    y += delta.head<3>();
    mu += delta[3];
    if (delta.head<3>().norm() <= 1e-15 * (1.0 + y.norm())) break;
  }
  // Final polish so the level-set residual meets the tolerance exactly.
  return retract(s, y, opts);
}

Vec3 radial_project(const Surface& s, const Vec3& direction) {
  const double n = direction.norm();
  if (!(n > 0.0)) throw Error(ErrorCode::InvalidArgument, "radial_project: zero direction");
  const Vec3 u = direction / n;
  if (auto axes = s.semi_axes()) {
    const Vec3 w = axes->cwiseInverse().cwiseAbs2();
    return u / std::sqrt(w.dot(u.cwiseProduct(u)));
  }
  // Newton on f(t) = Phi(t u), starting outside at the bounding radius.
  double t = s.scale();
  for (int it = 0; it < 100; ++it) {
    const double f = s.phi(t * u);
    const double df = s.grad(t * u).dot(u);
    if (std::abs(df) < s.gradient_floor()) break;
    const double step = f / df;
    t -= step;
    if (t <= 0.0) t = 1e-3 * s.scale();
    if (std::abs(step) <= 1e-15 * s.scale()) break;
  }
  return retract(s, t * u);
}

Vec3 unit_normal(const Surface& s, const Vec3& x) {
  const Vec3 g = s.grad(x);
  const double n = g.norm();
  if (n < s.gradient_floor()) {
    throw Error(ErrorCode::DegenerateGradient, "unit_normal: |grad Phi| below floor");
  }
  return g / n;
}

Vec3 tangent_project(const Surface& s, const Vec3& x, const Vec3& v) {
  const Vec3 n = unit_normal(s, x);
  return v - v.dot(n) * n;
}

TangentFrame tangent_frame(const Surface& s, const Vec3& x) {
  const Vec3 n = unit_normal(s, x);
  // Pick the coordinate axis least aligned with n.
  Eigen::Index axis = 0;
  n.cwiseAbs().minCoeff(&axis);
  Vec3 e1 = Vec3::Unit(axis) - n[axis] * n;
  e1.normalize();
  const Vec3 e2 = n.cross(e1);
  return {e1, e2, n};
}

double gauss_curvature(const Surface& s, const Vec3& x) {
  const Vec3 g = s.grad(x);
  const double g2 = g.squaredNorm();
  if (g2 < s.gradient_floor() * s.gradient_floor()) {
    throw Error(ErrorCode::DegenerateGradient, "gauss_curvature: |grad Phi| below floor");
  }
  const Mat3 h = s.hess(x);
  Mat3 adj;
  adj(0, 0) = h(1, 1) * h(2, 2) - h(1, 2) * h(2, 1);
  adj(0, 1) = h(0, 2) * h(2, 1) - h(0, 1) * h(2, 2);
  adj(0, 2) = h(0, 1) * h(1, 2) - h(0, 2) * h(1, 1);
  adj(1, 0) = h(1, 2) * h(2, 0) - h(1, 0) * h(2, 2);
  adj(1, 1) = h(0, 0) * h(2, 2) - h(0, 2) * h(2, 0);
  adj(1, 2) = h(0, 2) * h(1, 0) - h(0, 0) * h(1, 2);
  adj(2, 0) = h(1, 0) * h(2, 1) - h(1, 1) * h(2, 0);
  adj(2, 1) = h(0, 1) * h(2, 0) - h(0, 0) * h(2, 1);
  adj(2, 2) = h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0);
  return g.dot(adj * g) / (g2 * g2);
}

std::pair<double, double> principal_curvatures(const Surface& s, const Vec3& x) {
  const TangentFrame f = tangent_frame(s, x);
  const double gn = s.grad(x).norm();
  const Mat3 h = s.hess(x);
  const double a = f.e1.dot(h * f.e1) / gn;
  const double b = f.e1.dot(h * f.e2) / gn;
  const double c = f.e2.dot(h * f.e2) / gn;
  const double mean = 0.5 * (a + c);
  const double disc = std::sqrt(std::max(0.0, 0.25 * (a - c) * (a - c) + b * b));
  return {mean + disc, mean - disc};
}

double normal_curvature(const Surface& s, const Vec3& x, const Vec3& t) {
  return t.dot(s.hess(x) * t) / s.grad(x).norm();
}

}  // namespace halfgeo

#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace halfgeo {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

struct Sphere {
  double radius = 1.0;
};

/// (x/a)^2 + (y/b)^2 + (z/c)^2 = 1
struct TriaxialEllipsoid {
  double a = 1.0;
  double b = 1.0;
  double c = 1.0;
};

/// x^2 + y^2 + (z/c)^2 = 1 with 0 < c < 1
struct OblateEllipsoid {
  double c = 0.5;
};

/// One monomial coeff * x^px * y^py * z^pz of a polynomial level-set function.
struct PolynomialTerm {
  double coeff = 0.0;
  int px = 0;
  int py = 0;
  int pz = 0;
};

/// Phi(x) = sum of terms. The surface must be star-shaped about the origin
/// for mesh generation; `scale` is the bounding radius.
struct CustomImplicit {
  std::vector<PolynomialTerm> terms;
  double scale = 1.0;
};

using SurfaceKind = std::variant<Sphere, TriaxialEllipsoid, OblateEllipsoid, CustomImplicit>;

/// A closed regular level set {Phi = 0} in R^3 with analytic first and second
/// derivatives. Immutable; safe to share across threads.
class Surface {
 public:
  explicit Surface(SurfaceKind kind, std::string name = {});

  static Surface sphere(double radius);
  static Surface triaxial(double a, double b, double c);
  static Surface oblate(double c);

  const SurfaceKind& kind() const { return kind_; }
  const std::string& name() const { return name_; }

  double phi(const Vec3& x) const;
  Vec3 grad(const Vec3& x) const;
  Mat3 hess(const Vec3& x) const;

  /// Bounding radius of the surface about the origin.
  double scale() const { return scale_; }

  /// Semi-axes when the surface is an axis-aligned ellipsoid (sphere included).
  std::optional<Vec3> semi_axes() const;

  /// Gradients shorter than this are treated as a singular level set.
  double gradient_floor() const { return 1e-10; }

 private:
  SurfaceKind kind_;
  std::string name_;
  double scale_ = 1.0;
  // Phi = sum w_i x_i^2 - 1 for the ellipsoid kinds.
  std::optional<Vec3> quadric_;
};

struct ProjectionOptions {
  double tolerance = 1e-12;  // on |Phi|, multiplied by the surface scale
  int max_iterations = 50;
};

/// Closest-point projection onto the surface: x* with Phi(x*) = 0 and
/// x* - x parallel to grad Phi(x*). Throws NonConvergence.
Vec3 project_to_surface(const Surface& s, const Vec3& x, const ProjectionOptions& opts = {});

/// Newton iteration along the gradient. Cheaper than the closest-point
/// projection and equivalent to it to second order for points near the surface.
Vec3 retract(const Surface& s, const Vec3& x, const ProjectionOptions& opts = {});

/// Radial projection x -> t x, t > 0. Only for star-shaped surfaces.
Vec3 radial_project(const Surface& s, const Vec3& direction);

/// Unit normal grad Phi / |grad Phi|. Throws DegenerateGradient below the floor.
Vec3 unit_normal(const Surface& s, const Vec3& x);

/// v - (v.n) n
Vec3 tangent_project(const Surface& s, const Vec3& x, const Vec3& v);

/// Orthonormal tangent frame (e1, e2) at x with e1 x e2 = n.
struct TangentFrame {
  Vec3 e1;
  Vec3 e2;
  Vec3 normal;
};
TangentFrame tangent_frame(const Surface& s, const Vec3& x);

/// Gauss curvature of an implicit surface:
///   K = grad^T adj(H) grad / |grad|^4
double gauss_curvature(const Surface& s, const Vec3& x);

/// Principal curvatures (k1 >= k2) with the sign convention that the unit sphere
/// has k1 = k2 = 1 for an outward gradient.
std::pair<double, double> principal_curvatures(const Surface& s, const Vec3& x);

/// Normal curvature in tangent direction t (unit).
double normal_curvature(const Surface& s, const Vec3& x, const Vec3& t);

}  // namespace halfgeo

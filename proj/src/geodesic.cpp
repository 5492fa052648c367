#include "halfgeo/geodesic.hpp"

#include "halfgeo/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace halfgeo {

namespace {

struct State {
  Vec3 x;
  Vec3 v;
};

// Acceleration keeping the curve on {Phi = 0}: differentiate grad.x' = 0 twice.
Vec3 acceleration(const Surface& s, const Vec3& x, const Vec3& v) {
  const Vec3 g = s.grad(x);
  const double g2 = g.squaredNorm();
  if (g2 < s.gradient_floor() * s.gradient_floor()) {
    throw Error(ErrorCode::DegenerateGradient, "shoot: |grad Phi| below floor along the path");
  }
  return (-v.dot(s.hess(x) * v) / g2) * g;
}

// One RK4 step followed by projection. Returns the pre-normalization speed error.
double rk4_step(const Surface& s, State& st, double h) {
  const Vec3 k1x = st.v;
  const Vec3 k1v = acceleration(s, st.x, st.v);
  const Vec3 x2 = st.x + 0.5 * h * k1x, v2 = st.v + 0.5 * h * k1v;
  const Vec3 k2v = acceleration(s, x2, v2);
  const Vec3 x3 = st.x + 0.5 * h * v2, v3 = st.v + 0.5 * h * k2v;
  const Vec3 k3v = acceleration(s, x3, v3);
  const Vec3 x4 = st.x + h * v3, v4 = st.v + h * k3v;
  const Vec3 k4v = acceleration(s, x4, v4);

  st.x += (h / 6.0) * (k1x + 2.0 * v2 + 2.0 * v3 + v4);
  st.v += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);

  st.x = retract(s, st.x);
  st.v = tangent_project(s, st.x, st.v);
  const double speed = st.v.norm();
  st.v /= speed;
  return std::abs(speed - 1.0);
}

template <typename OnSample>
double integrate(const Surface& s, const Vec3& p, const Vec3& v, double length, const ShootOptions& opts,
                 OnSample&& on_sample, State& st) {
  if (!(length >= 0.0) || !std::isfinite(length)) {
    throw Error(ErrorCode::InvalidArgument, "shoot: length must be a nonnegative real");
  }
  if (!(opts.step > 0.0)) throw Error(ErrorCode::InvalidArgument, "shoot: step must be positive");
  require_unit_tangent(s, p, v, "shoot");
  st = {p, v};
  const auto n = static_cast<long>(std::ceil(length / opts.step - 1e-12));
  const double h = n > 0 ? length / static_cast<double>(n) : 0.0;
  double drift = 0.0;
  for (long i = 1; i <= n; ++i) {
    drift = std::max(drift, rk4_step(s, st, h));
    on_sample(i == n ? length : static_cast<double>(i) * h, st);
  }
  if (drift > opts.drift_per_length * std::max(1.0, length)) {
    throw Error(ErrorCode::DriftExceeded, "shoot: speed drift exceeds the configured bound");
  }
  return drift;
}

GeodesicSample hermite(const GeodesicSample& a, const GeodesicSample& b, double t) {
  const double dt = b.t - a.t;
  if (dt <= 0.0) return a;
  const double u = (t - a.t) / dt;
  const double u2 = u * u, u3 = u2 * u;
  const double h00 = 2 * u3 - 3 * u2 + 1, h10 = u3 - 2 * u2 + u, h01 = -2 * u3 + 3 * u2, h11 = u3 - u2;
  const double d00 = 6 * u2 - 6 * u, d10 = 3 * u2 - 4 * u + 1, d01 = -6 * u2 + 6 * u, d11 = 3 * u2 - 2 * u;
  GeodesicSample out;
  out.t = t;
  out.x = h00 * a.x + h10 * dt * a.v + h01 * b.x + h11 * dt * b.v;
  out.v = (d00 * a.x + d01 * b.x) / dt + d10 * a.v + d11 * b.v;
  return out;
}

std::string format17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void require_unit_tangent(const Surface& s, const Vec3& p, const Vec3& v, const char* op) {
  if (std::abs(s.phi(p)) > 1e-9 * s.scale()) {
    throw Error(ErrorCode::InvalidArgument, std::string(op) + ": start point is not on the surface");
  }
  if (std::abs(v.norm() - 1.0) > 1e-10) {
    throw Error(ErrorCode::InvalidArgument, std::string(op) + ": direction is not a unit vector");
  }
  if (std::abs(v.dot(unit_normal(s, p))) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument, std::string(op) + ": direction is not tangent at the start point");
  }
}

GeodesicPath shoot(const Surface& s, const Vec3& p, const Vec3& v, double length, const ShootOptions& opts) {
  GeodesicPath path;
  path.samples.reserve(static_cast<std::size_t>(length / opts.step) + 2);
  path.samples.push_back({0.0, p, v});
  State st;
  path.speed_drift = integrate(
      s, p, v, length, opts, [&](double t, const State& x) { path.samples.push_back({t, x.x, x.v}); }, st);
  return path;
}

EndState shoot_end(const Surface& s, const Vec3& p, const Vec3& v, double length, const ShootOptions& opts) {
  State st;
  const double drift = integrate(s, p, v, length, opts, [](double, const State&) {}, st);
  return {st.x, st.v, drift};
}

GeodesicSample sample_at(const Surface& s, const GeodesicPath& path, double t) {
  const auto& smp = path.samples;
  if (smp.empty()) throw Error(ErrorCode::InvalidArgument, "sample_at: empty path");
  if (t <= smp.front().t) return smp.front();
  if (t >= smp.back().t) return smp.back();
  auto it = std::upper_bound(smp.begin(), smp.end(), t,
                             [](double value, const GeodesicSample& g) { return value < g.t; });
  const auto& b = *it;
  const auto& a = *(it - 1);
  GeodesicSample out = hermite(a, b, t);
  out.x = retract(s, out.x);
  out.v = tangent_project(s, out.x, out.v).normalized();
  return out;
}

GeodesicSample sample_periodic(const Surface& s, const GeodesicPath& path, double period, double t) {
  double r = std::fmod(t, period);
  if (r < 0.0) r += period;
  GeodesicSample out = sample_at(s, path, r);
  out.t = t;
  return out;
}

void write_csv(std::ostream& os, const GeodesicPath& path) {
  os << "t,x,y,z,vx,vy,vz\n";
  for (const auto& g : path.samples) {
    os << format17(g.t) << ',' << format17(g.x[0]) << ',' << format17(g.x[1]) << ',' << format17(g.x[2]) << ','
       << format17(g.v[0]) << ',' << format17(g.v[1]) << ',' << format17(g.v[2]) << '\n';
  }
}

GeodesicPath read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorCode::Io, "read_csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,x,y,z,vx,vy,vz") throw Error(ErrorCode::Io, "read_csv: unexpected header '" + line + "'");
  GeodesicPath path;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    double vals[7];
    const char* first = line.data();
    const char* last = line.data() + line.size();
    for (int k = 0; k < 7; ++k) {
      auto [ptr, ec] = std::from_chars(first, last, vals[k]);
      if (ec != std::errc() || (k < 6 && (ptr == last || *ptr != ','))) {
        throw Error(ErrorCode::Io, "read_csv: malformed row at line " + std::to_string(lineno));
      }
      first = ptr + (k < 6 ? 1 : 0);
    }
    if (first != last) throw Error(ErrorCode::Io, "read_csv: trailing data at line " + std::to_string(lineno));
    GeodesicSample g{vals[0], Vec3(vals[1], vals[2], vals[3]), Vec3(vals[4], vals[5], vals[6])};
    if (!path.samples.empty() && !(g.t > path.samples.back().t)) {
      throw Error(ErrorCode::Io, "read_csv: arclength not increasing at line " + std::to_string(lineno));
    }
    path.samples.push_back(g);
    path.speed_drift = std::max(path.speed_drift, std::abs(g.v.norm() - 1.0));
  }
  if (path.samples.empty()) throw Error(ErrorCode::Io, "read_csv: no samples");
  return path;
}

void write_csv_file(const std::string& filename, const GeodesicPath& path) {
  std::ofstream os(filename);
  if (!os) throw Error(ErrorCode::Io, "cannot open '" + filename + "' for writing");
  write_csv(os, path);
}

GeodesicPath read_csv_file(const std::string& filename) {
  std::ifstream is(filename);
  if (!is) throw Error(ErrorCode::Io, "cannot open '" + filename + "'");
  return read_csv(is);
}

}  // namespace halfgeo

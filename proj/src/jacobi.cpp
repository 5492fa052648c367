#include "halfgeo/jacobi.hpp"

#include "halfgeo/error.hpp"
#include "halfgeo/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace halfgeo {

namespace {

struct JState {
  double j = 0.0;
  double dj = 0.0;
};

// RK4 for J'' = -K J with curvature at the start, middle and end of the step.
JState jacobi_step(JState s, double h, double k0, double km, double k1) {
  const double a1 = s.dj, b1 = -k0 * s.j;
  const double a2 = s.dj + 0.5 * h * b1, b2 = -km * (s.j + 0.5 * h * a1);
  const double a3 = s.dj + 0.5 * h * b2, b3 = -km * (s.j + 0.5 * h * a2);
  const double a4 = s.dj + h * b3, b4 = -k1 * (s.j + h * a3);
  return {s.j + h / 6.0 * (a1 + 2 * a2 + 2 * a3 + a4), s.dj + h / 6.0 * (b1 + 2 * b2 + 2 * b3 + b4)};
}

double curvature_at(const Surface& s, const GeodesicPath& path, double t) {
  return gauss_curvature(s, sample_at(s, path, t).x);
}

std::vector<JState> integrate(const Surface& s, const GeodesicPath& path, std::vector<double>& k_nodes) {
  const auto& smp = path.samples;
  k_nodes.resize(smp.size());
  for (std::size_t i = 0; i < smp.size(); ++i) k_nodes[i] = gauss_curvature(s, smp[i].x);
  std::vector<JState> states(smp.size());
  states[0] = {0.0, 1.0};
  for (std::size_t i = 0; i + 1 < smp.size(); ++i) {
    const double h = smp[i + 1].t - smp[i].t;
    const double km = curvature_at(s, path, smp[i].t + 0.5 * h);
    states[i + 1] = jacobi_step(states[i], h, k_nodes[i], km, k_nodes[i + 1]);
  }
  return states;
}

}  // namespace

std::vector<double> jacobi_field(const Surface& s, const GeodesicPath& path) {
  std::vector<double> k;
  const auto states = integrate(s, path, k);
  std::vector<double> out(states.size());
  std::transform(states.begin(), states.end(), out.begin(), [](const JState& st) { return st.j; });
  return out;
}

IndexReport jacobi_index(const Surface& s, const GeodesicPath& path, const JacobiOptions& opts) {
  IndexReport report;
  const auto& smp = path.samples;
  if (smp.size() < 2) return report;
  std::vector<double> k;
  const auto states = integrate(s, path, k);
  double max_slope = 1.0;
  for (const auto& st : states) max_slope = std::max(max_slope, std::abs(st.dj));

  const double length = path.length();
  for (std::size_t i = 0; i + 1 < smp.size(); ++i) {
    const double ja = states[i].j, jb = states[i + 1].j;
    // J(0) = 0 is the base point itself, not a conjugate point.
    // A node exactly at zero was already counted by the previous interval.
    const bool change = i > 0 && ja != 0.0 && ((ja > 0.0) != (jb > 0.0) || jb == 0.0);
    if (!change) continue;
    const double ta = smp[i].t;
    const double k0 = k[i];
    auto eval = [&](double t) {
      const double h = t - ta;
      if (h <= 0.0) return states[i];
      return jacobi_step(states[i], h, k0, curvature_at(s, path, ta + 0.5 * h), curvature_at(s, path, t));
    };
    double lo = ta, hi = smp[i + 1].t;
    const bool lo_positive = ja > 0.0;
    while (hi - lo > opts.bisection_tol) {
      const double mid = 0.5 * (lo + hi);
      if ((eval(mid).j > 0.0) == lo_positive) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double t0 = 0.5 * (lo + hi);
    if (t0 <= 0.0 || t0 >= length) continue;
    report.conjugate_times.push_back({t0, 1});
    if (std::abs(eval(t0).dj) < 1e-6 * max_slope) report.tangential_zero_suspected = true;
  }
  // Between-sample zero pairs with no sign change at the nodes: |J| small with J' changing sign.
  for (std::size_t i = 1; i + 1 < smp.size(); ++i) {
    const bool slope_flip = (states[i].dj > 0.0) != (states[i + 1].dj > 0.0);
    const bool same_sign = (states[i].j > 0.0) == (states[i + 1].j > 0.0);
    const double h = smp[i + 1].t - smp[i].t;
    if (slope_flip && same_sign && std::abs(states[i].j) < h * max_slope) report.tangential_zero_suspected = true;
  }
  report.index = static_cast<int>(report.conjugate_times.size());
  return report;
}

double conjugate_radius_estimate(const Surface& s, const std::vector<DirectionSample>& plan,
                                 const ConjugateRadiusOptions& opts) {
  if (plan.empty()) throw Error(ErrorCode::InvalidArgument, "conjugate_radius_estimate: empty sampling plan");
  const double max_length = opts.max_length > 0.0 ? opts.max_length : 2.0 * std::numbers::pi * s.scale();
  ShootOptions shoot_opts;
  shoot_opts.step = opts.step > 0.0 ? opts.step : 1e-3 * s.scale();
  std::vector<double> first(plan.size(), max_length);
  parallel_for(plan.size(), opts.jobs, [&](std::size_t i) {
    const auto path = shoot(s, plan[i].point, plan[i].direction, max_length, shoot_opts);
    const auto report = jacobi_index(s, path);
    if (!report.conjugate_times.empty()) first[i] = report.conjugate_times.front().t;
  });
  return *std::min_element(first.begin(), first.end());
}

}  // namespace halfgeo

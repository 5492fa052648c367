#include "halfgeo/distance.hpp"

#include "halfgeo/error.hpp"
#include "halfgeo/jacobi.hpp"
#include "halfgeo/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace halfgeo {

std::string_view to_string(DistanceMethod m) {
  return m == DistanceMethod::MeshOracle ? "MeshOracle" : "ShootingRefined";
}

std::string_view to_string(BlaschkeVerdict v) {
  switch (v) {
    case BlaschkeVerdict::Blaschke: return "Blaschke";
    case BlaschkeVerdict::NotBlaschke: return "NotBlaschke";
    case BlaschkeVerdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

namespace {

constexpr int kRingDirections = 24;
constexpr int kRingCandidates = 3;
constexpr double kCoarseStepFactor = 2e-2;

struct Seed {
  double angle = 0.0;
  double length = 0.0;
  double miss = 0.0;
};

}  // namespace

DistanceEngine::DistanceEngine(Surface surface, double h, DistanceOptions opts)
    : DistanceEngine(surface, std::make_shared<const SurfaceMesh>(build_mesh(surface, h)), opts) {}

DistanceEngine::DistanceEngine(Surface surface, std::shared_ptr<const SurfaceMesh> mesh, DistanceOptions opts)
    : surface_(std::move(surface)), mesh_(std::move(mesh)), opts_(opts) {
  if (!mesh_) throw Error(ErrorCode::InvalidArgument, "DistanceEngine: null mesh");
  if (opts_.step <= 0.0) opts_.step = 1e-3 * surface_.scale();
}

double DistanceEngine::snap_bound(const Vec3& x, int vertex) const {
  return arc_upper_bound((x - mesh_->vertices[vertex]).norm(), mesh_->kappa_bound);
}

DistanceResult DistanceEngine::mesh_distance(int p, int q) const {
  const auto path = shortest_path(*mesh_, p, q);
  return {path.length, DistanceMethod::MeshOracle, path.length, path.length / mesh_->distortion};
}

DistanceResult DistanceEngine::mesh_distance(const Vec3& p, const Vec3& q) const {
  const int vp = nearest_vertex(*mesh_, p), vq = nearest_vertex(*mesh_, q);
  const auto path = shortest_path(*mesh_, vp, vq);
  const double snaps = snap_bound(p, vp) + snap_bound(q, vq);
  const double upper = path.length + snaps;
  return {upper, DistanceMethod::MeshOracle, upper, std::max(0.0, path.length / mesh_->distortion - snaps)};
}

double DistanceEngine::eccentricity_bound(const Vec3& p) const {
  const int vp = nearest_vertex(*mesh_, p);
  const auto d = distances_from(*mesh_, vp);
  double worst = 0.0;
  for (std::size_t v = 0; v < d.size(); ++v) worst = std::max(worst, d[v] + snap_bound(mesh_->vertices[v], static_cast<int>(v)));
  return worst + snap_bound(p, vp) + mesh_->max_edge;
}

DistanceEngine::Shot DistanceEngine::solve_bvp(const Vec3& p, const Vec3& q, const Vec3& dir0, double len0) const {
  const TangentFrame frame = tangent_frame(surface_, p);
  const double scale = surface_.scale();
  const double tol = opts_.miss_tol * scale;

  auto direction = [&](double angle) { return (std::cos(angle) * frame.e1 + std::sin(angle) * frame.e2).normalized(); };
  auto run = [&](double angle, double length, double step, Vec3& end_v) {
    ShootOptions so;
    so.step = step;
    so.drift_per_length = std::numeric_limits<double>::infinity();
    const EndState e = shoot_end(surface_, p, direction(angle), length, so);
    end_v = e.v;
    return Vec3(e.x - q);
  };

  double angle = std::atan2(dir0.dot(frame.e2), dir0.dot(frame.e1));
  double length = std::max(len0, 1e-6 * scale);

  // Coarse solve, then polish at the working step from the coarse solution.
  const double steps[2] = {std::max(opts_.step, kCoarseStepFactor * scale), opts_.step};
  Shot result;
  for (int stage = 0; stage < 2; ++stage) {
    const double step = steps[stage];
    const double stage_tol = stage == 0 ? std::max(tol, 1e-9 * scale) : tol;
    Vec3 end_v;
    Vec3 r = run(angle, length, step, end_v);
    double lambda = 1e-3;
    bool converged = r.norm() <= stage_tol;
    for (int it = 0; it < opts_.max_iterations && !converged; ++it) {
      const double delta = 1e-7;
      Vec3 unused;
      const Vec3 r_angle = run(angle + delta, length, step, unused);
      Eigen::Matrix<double, 3, 2> J;
      J.col(0) = (r_angle - r) / delta;
      J.col(1) = end_v;
      const Eigen::Matrix2d A = J.transpose() * J;
      const Eigen::Vector2d g = J.transpose() * r;
      bool accepted = false;
      while (!accepted && lambda < 1e10) {
        Eigen::Matrix2d M = A;
        M(0, 0) += lambda * A(0, 0) + 1e-14;
        M(1, 1) += lambda * A(1, 1) + 1e-14;
        Eigen::Vector2d d = M.ldlt().solve(-g);
        d[0] = std::clamp(d[0], -0.5, 0.5);
        d[1] = std::clamp(d[1], -0.5 * scale, 0.5 * scale);
        const double new_angle = angle + d[0];
        const double new_length = std::abs(length + d[1]);
        Vec3 new_v;
        const Vec3 new_r = run(new_angle, new_length, step, new_v);
        if (new_r.norm() < r.norm()) {
          angle = new_angle;
          length = new_length;
          r = new_r;
          end_v = new_v;
          lambda = std::max(lambda / 3.0, 1e-12);
          accepted = true;
        } else {
          lambda *= 4.0;
        }
      }
      if (!accepted) break;
      converged = r.norm() <= stage_tol;
    }
    if (stage == 0 && r.norm() > 1e-6 * scale) return result;  // coarse stage failed to find a hit
    result.converged = converged;
    result.length = length;
  }
  return result;
}

DistanceResult DistanceEngine::distance(const Vec3& p, const Vec3& q) const {
  const double scale = surface_.scale();
  if ((p - q).norm() <= 1e-14 * scale) return {0.0, DistanceMethod::ShootingRefined, 0.0, 0.0};

  const int vp = nearest_vertex(*mesh_, p), vq = nearest_vertex(*mesh_, q);
  const GraphPath graph = shortest_path(*mesh_, vp, vq);
  const double snaps = snap_bound(p, vp) + snap_bound(q, vq);
  DistanceResult oracle{graph.length + snaps, DistanceMethod::MeshOracle, graph.length + snaps,
                        std::max(0.0, graph.length / mesh_->distortion - snaps)};
  const double upper = oracle.upper_bound;
  const TangentFrame frame = tangent_frame(surface_, p);
  auto angle_of = [&](const Vec3& d) { return std::atan2(d.dot(frame.e2), d.dot(frame.e1)); };

  std::vector<Seed> seeds;
  // Mesh branch: aim at the graph path vertex a third of the way along.
  {
    Vec3 target = q;
    if (graph.vertices.size() > 2) {
      double acc = 0.0;
      for (std::size_t k = 1; k < graph.vertices.size(); ++k) {
        acc += (mesh_->vertices[graph.vertices[k]] - mesh_->vertices[graph.vertices[k - 1]]).norm();
        target = mesh_->vertices[graph.vertices[k]];
        if (acc >= graph.length / 3.0) break;
      }
    }
    Vec3 d = tangent_project(surface_, p, target - p);
    if (d.norm() < 1e-12 * scale) d = tangent_project(surface_, p, q - p);
    if (d.norm() >= 1e-14 * scale) {
      const double chord = (q - p).norm();
      seeds.push_back({angle_of(d), graph.vertices.size() > 2 ? upper : chord, 0.0});
    }
  }
  // Exponential-map ring: closest approaches of a fan of coarse geodesics.
  if ((q - p).norm() > 4.0 * mesh_->max_edge) {
    ShootOptions so;
    so.step = kCoarseStepFactor * scale;
    so.drift_per_length = std::numeric_limits<double>::infinity();
    std::vector<Seed> ring(kRingDirections);
    for (int k = 0; k < kRingDirections; ++k) {
      const double angle = 2.0 * std::numbers::pi * k / kRingDirections;
      const Vec3 v = (std::cos(angle) * frame.e1 + std::sin(angle) * frame.e2).normalized();
      const auto path = shoot(surface_, p, v, upper * 1.05, so);
      Seed best{angle, 0.0, std::numeric_limits<double>::infinity()};
      for (const auto& smp : path.samples) {
        const double miss = (smp.x - q).norm();
        if (miss < best.miss) best = {angle, smp.t, miss};
      }
      // Sub-step closest approach; near a conjugate point every ray passes
      // close to q and sample spacing would otherwise decide the ranking.
      double a = std::max(0.0, best.length - so.step), b = std::min(path.length(), best.length + so.step);
      auto miss_at = [&](double t) { return (sample_at(surface_, path, t).x - q).norm(); };
      const double g = 0.5 * (std::sqrt(5.0) - 1.0);
      double c = b - g * (b - a), d = a + g * (b - a), fc = miss_at(c), fd = miss_at(d);
      for (int it = 0; it < 40 && b - a > 1e-9 * scale; ++it) {
        if (fc < fd) {
          b = d; d = c; fd = fc; c = b - g * (b - a); fc = miss_at(c);
        } else {
          a = c; c = d; fc = fd; d = a + g * (b - a); fd = miss_at(d);
        }
      }
      const double tm = 0.5 * (a + b), fm = miss_at(tm);
      if (fm < best.miss) best = {angle, tm, fm};
      ring[k] = best;
    }
    std::vector<Seed> minima;
    for (int k = 0; k < kRingDirections; ++k) {
      const auto& prev = ring[(k + kRingDirections - 1) % kRingDirections];
      const auto& next = ring[(k + 1) % kRingDirections];
      if (ring[k].miss <= prev.miss && ring[k].miss <= next.miss) minima.push_back(ring[k]);
    }
    std::sort(minima.begin(), minima.end(), [](const Seed& a, const Seed& b) { return a.length < b.length; });
    if (minima.size() > kRingCandidates) minima.resize(kRingCandidates);
    seeds.insert(seeds.end(), minima.begin(), minima.end());
  }

  double best = std::numeric_limits<double>::infinity();
  for (const auto& seed : seeds) {
    const Vec3 dir = std::cos(seed.angle) * frame.e1 + std::sin(seed.angle) * frame.e2;
    const Shot shot = solve_bvp(p, q, dir, seed.length);
    if (shot.converged && shot.length <= upper + 1e-9) best = std::min(best, shot.length);
  }
  if (!std::isfinite(best)) return oracle;
  return {best, DistanceMethod::ShootingRefined, upper, std::min(oracle.lower_bound, best)};
}

CutTimeSample DistanceEngine::cut_time(const Vec3& p, const Vec3& v, double tol) const {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "cut_time: tol must be positive");
  require_unit_tangent(surface_, p, v, "cut_time");
  const double horizon = eccentricity_bound(p) + 2.0 * tol;
  ShootOptions so;
  so.step = opts_.step;
  const GeodesicPath path = shoot(surface_, p, v, horizon, so);
  auto minimizing = [&](double t) {
    const Vec3 x = sample_at(surface_, path, t).x;
    return distance(p, x).value >= t - tol;
  };
  double lo = 0.0, hi = horizon;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (minimizing(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {p, v, 0.5 * (lo + hi), lo, hi};
}

double maximize_distance(const DistanceEngine& engine, Vec3& p, Vec3& q, double initial_step, double final_step) {
  const Surface& s = engine.surface();
  double best = engine.distance(p, q).value;
  for (int round = 0; round < 2; ++round) {
    for (int side = 0; side < 2; ++side) {
      Vec3& moving = side == 0 ? q : p;
      const Vec3& fixed = side == 0 ? p : q;
      for (double step = initial_step; step >= final_step; step *= 0.5) {
        bool improved = true;
        while (improved) {
          improved = false;
          const TangentFrame f = tangent_frame(s, moving);
          const Vec3 dirs[4] = {f.e1, -f.e1, f.e2, -f.e2};
          for (const Vec3& d : dirs) {
            const Vec3 candidate = retract(s, moving + step * d);
            const double value = engine.distance(fixed, candidate).value;
            if (value > best) {
              best = value;
              moving = candidate;
              improved = true;
              break;
            }
          }
        }
      }
    }
  }
  return best;
}

ScanReport scan(const DistanceEngine& engine, const ScanPlan& plan) {
  const Surface& s = engine.surface();
  const SurfaceMesh& mesh = engine.mesh();
  if (plan.point_samples <= 0 || plan.direction_samples <= 0 || plan.diameter_points < 2) {
    throw Error(ErrorCode::InvalidArgument, "scan: sampling plans must be nonempty");
  }
  ScanReport report;
  const double scale = s.scale();

  // Diameter: all pairs on the mesh, refine the best pairs, then local search.
  const auto points = fibonacci_points(s, plan.diameter_points);
  const std::size_t n = points.size();
  std::vector<int> vid(n);
  std::vector<double> snap(n);
  for (std::size_t i = 0; i < n; ++i) {
    vid[i] = nearest_vertex(mesh, points[i]);
    snap[i] = arc_upper_bound((points[i] - mesh.vertices[vid[i]]).norm(), mesh.kappa_bound);
  }
  std::vector<std::vector<double>> field(n);
  parallel_for(n, plan.jobs, [&](std::size_t i) { field[i] = distances_from(mesh, vid[i]); });
  struct Pair {
    double value;
    std::size_t i, j;
  };
  std::vector<Pair> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.push_back({field[i][vid[j]] + snap[i] + snap[j], i, j});
  }
  const std::size_t top = std::min<std::size_t>(pairs.size(), static_cast<std::size_t>(std::max(1, plan.refine_pairs)));
  std::partial_sort(pairs.begin(), pairs.begin() + top, pairs.end(), [](const Pair& a, const Pair& b) {
    return a.value > b.value || (a.value == b.value && std::tie(a.i, a.j) < std::tie(b.i, b.j));
  });
  std::vector<double> refined(top);
  parallel_for(top, plan.jobs, [&](std::size_t k) {
    refined[k] = engine.distance(points[pairs[k].i], points[pairs[k].j]).value;
  });
  const std::size_t best_pair = static_cast<std::size_t>(std::max_element(refined.begin(), refined.end()) - refined.begin());
  Vec3 dp = points[pairs[best_pair].i], dq = points[pairs[best_pair].j];
  report.diameter_est = maximize_distance(engine, dp, dq, 0.05 * scale, 2.5e-5 * scale);
  report.diameter_p = dp;
  report.diameter_q = dq;

  // Cut times and conjugate radius on the same direction plan.
  const auto directions = direction_plan(s, plan.point_samples, plan.direction_samples, plan.seed);
  std::vector<double> cuts(directions.size());
  parallel_for(directions.size(), plan.jobs, [&](std::size_t k) {
    cuts[k] = engine.cut_time(directions[k].point, directions[k].direction, plan.cut_tol * scale).cut_time;
  });
  report.cut_time_count = cuts.size();
  report.cut_time_min = *std::min_element(cuts.begin(), cuts.end());
  report.cut_time_max = *std::max_element(cuts.begin(), cuts.end());
  report.cut_time_mean = std::accumulate(cuts.begin(), cuts.end(), 0.0) / static_cast<double>(cuts.size());

  ConjugateRadiusOptions cro;
  cro.step = engine.step();
  cro.jobs = plan.jobs;
  report.conjugate_radius = conjugate_radius_estimate(s, directions, cro);

  report.half_shortest_closed = std::numeric_limits<double>::infinity();
  for (double L : plan.closed_geodesic_lengths) report.half_shortest_closed = std::min(report.half_shortest_closed, 0.5 * L);

  report.inj_est = std::min({report.cut_time_min, report.conjugate_radius, report.half_shortest_closed});
  report.tol = plan.verdict_rel_tol * report.diameter_est;
  const double gap = std::abs(report.inj_est - report.diameter_est);
  if (gap <= report.tol) {
    report.verdict = BlaschkeVerdict::Blaschke;
  } else if (gap <= 3.0 * report.tol) {
    report.verdict = BlaschkeVerdict::Inconclusive;
  } else {
    report.verdict = BlaschkeVerdict::NotBlaschke;
  }
  return report;
}

}  // namespace halfgeo

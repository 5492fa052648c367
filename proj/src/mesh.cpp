#include "halfgeo/mesh.hpp"

#include "halfgeo/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>
#include <unordered_map>

namespace halfgeo {

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

// Triangle edges plus the diagonal across every interior edge.
std::vector<std::pair<int, int>> graph_edges(const std::vector<std::array<int, 3>>& triangles) {
  std::unordered_map<std::uint64_t, std::array<int, 2>> opposite;
  opposite.reserve(triangles.size() * 2);
  for (const auto& t : triangles) {
    for (int e = 0; e < 3; ++e) {
      const int a = t[e], b = t[(e + 1) % 3], c = t[(e + 2) % 3];
      auto [it, inserted] = opposite.try_emplace(edge_key(a, b), std::array<int, 2>{c, -1});
      if (!inserted) it->second[1] = c;
    }
  }
  std::vector<std::pair<int, int>> edges;
  edges.reserve(opposite.size() * 2);
  for (const auto& [key, opp] : opposite) {
    edges.emplace_back(static_cast<int>(key >> 32), static_cast<int>(key & 0xffffffffu));
    if (opp[1] >= 0) edges.emplace_back(opp[0], opp[1]);
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

void build_csr(SurfaceMesh& mesh, const std::vector<std::pair<int, int>>& edges,
               const std::function<double(int, int)>& weight) {
  const int n = static_cast<int>(mesh.vertices.size());
  std::vector<int> degree(n, 0);
  for (const auto& [a, b] : edges) {
    ++degree[a];
    ++degree[b];
  }
  mesh.offsets.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) mesh.offsets[i + 1] = mesh.offsets[i] + degree[i];
  mesh.neighbors.assign(mesh.offsets.back(), 0);
  mesh.weights.assign(mesh.offsets.back(), 0.0);
  std::vector<int> fill(mesh.offsets.begin(), mesh.offsets.end() - 1);
  for (const auto& [a, b] : edges) {
    const double w = weight(a, b);
    mesh.neighbors[fill[a]] = b;
    mesh.weights[fill[a]++] = w;
    mesh.neighbors[fill[b]] = a;
    mesh.weights[fill[b]++] = w;
  }
}

std::vector<double> dijkstra(const SurfaceMesh& mesh, int source, int target, std::vector<int>* parent) {
  const int n = static_cast<int>(mesh.vertices.size());
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  if (parent) parent->assign(n, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[source] = 0.0;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    if (u == target) break;
    for (int k = mesh.offsets[u]; k < mesh.offsets[u + 1]; ++k) {
      const int v = mesh.neighbors[k];
      const double nd = d + mesh.weights[k];
      if (nd < dist[v]) {
        dist[v] = nd;
        if (parent) (*parent)[v] = u;
        queue.emplace(nd, v);
      }
    }
  }
  return dist;
}

double max_triangle_edge(const std::vector<Vec3>& v, const std::vector<std::array<int, 3>>& tris) {
  double m = 0.0;
  for (const auto& t : tris) {
    for (int e = 0; e < 3; ++e) m = std::max(m, (v[t[e]] - v[t[(e + 1) % 3]]).norm());
  }
  return m;
}

double measure_distortion(const std::vector<Vec3>& unit_vertices, const std::vector<std::pair<int, int>>& edges,
                          double unit_max_edge) {
  SurfaceMesh sphere;
  sphere.vertices = unit_vertices;
  build_csr(sphere, edges, [&](int a, int b) {
    return arc_upper_bound((unit_vertices[a] - unit_vertices[b]).norm(), 1.0);
  });
  const int n = static_cast<int>(unit_vertices.size());
  const double min_separation = std::min(5.0 * unit_max_edge, 0.5);
  double worst = 1.0;
  for (int source : {0, n / 3, (2 * n) / 3}) {
    const auto d = distances_from(sphere, source);
    for (int v = 0; v < n; ++v) {
      const double exact = std::acos(std::clamp(unit_vertices[source].dot(unit_vertices[v]), -1.0, 1.0));
      if (exact >= min_separation) worst = std::max(worst, d[v] / exact);
    }
  }
  return worst;
}

}  // namespace

double arc_upper_bound(double chord, double kappa) {
  if (kappa <= 0.0) return chord;
  const double x = std::min(1.0, 0.5 * kappa * chord);
  return 2.0 * std::asin(x) / kappa;
}

void icosphere(int depth, std::vector<Vec3>& vertices, std::vector<std::array<int, 3>>& triangles) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  vertices = {{-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0}, {0, -1, phi}, {0, 1, phi},
              {0, -1, -phi}, {0, 1, -phi}, {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& v : vertices) v.normalize();
  triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
               {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
               {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (int level = 0; level < depth; ++level) {
    std::unordered_map<std::uint64_t, int> midpoint;
    midpoint.reserve(triangles.size() * 2);
    auto mid = [&](int a, int b) {
      auto [it, inserted] = midpoint.try_emplace(edge_key(a, b), 0);
      if (inserted) {
        vertices.push_back((vertices[a] + vertices[b]).normalized());
        it->second = static_cast<int>(vertices.size()) - 1;
      }
      return it->second;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(triangles.size() * 4);
    for (const auto& t : triangles) {
      const int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({t[1], bc, ab});
      next.push_back({t[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    triangles = std::move(next);
  }
}

SurfaceMesh build_mesh(const Surface& s, double h, const MeshOptions& opts) {
  if (!(h >= opts.min_h && h <= opts.max_h)) {
    throw Error(ErrorCode::InvalidArgument, "build_mesh: h outside the configured range");
  }
  SurfaceMesh mesh;
  mesh.h = h;
  std::vector<Vec3> unit;
  for (int depth = 0;; ++depth) {
    if (depth > opts.max_depth) {
      throw Error(ErrorCode::InvalidArgument, "build_mesh: h finer than the subdivision budget allows");
    }
    icosphere(depth, unit, mesh.triangles);
    mesh.vertices.resize(unit.size());
    for (std::size_t i = 0; i < unit.size(); ++i) mesh.vertices[i] = radial_project(s, unit[i]);
    mesh.max_edge = max_triangle_edge(mesh.vertices, mesh.triangles);
    mesh.depth = depth;
    if (mesh.max_edge <= h) break;
  }

  double kappa = 0.0;
  for (const auto& v : mesh.vertices) {
    const auto [k1, k2] = principal_curvatures(s, v);
    kappa = std::max({kappa, std::abs(k1), std::abs(k2)});
  }
  mesh.kappa_bound = 1.02 * kappa;

  const auto edges = graph_edges(mesh.triangles);
  build_csr(mesh, edges, [&](int a, int b) {
    return arc_upper_bound((mesh.vertices[a] - mesh.vertices[b]).norm(), mesh.kappa_bound);
  });
  if (!is_connected(mesh)) {
    throw Error(ErrorCode::ResolutionTooCoarse, "build_mesh: edge graph is disconnected");
  }
  mesh.distortion = measure_distortion(unit, edges, max_triangle_edge(unit, mesh.triangles));
  return mesh;
}

int nearest_vertex(const SurfaceMesh& mesh, const Vec3& x) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const double d = (mesh.vertices[i] - x).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

GraphPath shortest_path(const SurfaceMesh& mesh, int source, int target) {
  std::vector<int> parent;
  const auto dist = dijkstra(mesh, source, target, &parent);
  if (!std::isfinite(dist[target])) {
    throw Error(ErrorCode::Disconnected, "shortest_path: target unreachable");
  }
  GraphPath path;
  path.length = dist[target];
  for (int v = target; v != -1; v = parent[v]) path.vertices.push_back(v);
  std::reverse(path.vertices.begin(), path.vertices.end());
  return path;
}

std::vector<double> distances_from(const SurfaceMesh& mesh, int source) {
  return dijkstra(mesh, source, -1, nullptr);
}

bool is_connected(const SurfaceMesh& mesh) {
  if (mesh.vertices.empty()) return false;
  const auto d = distances_from(mesh, 0);
  return std::all_of(d.begin(), d.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace halfgeo

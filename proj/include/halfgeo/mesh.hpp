#pragma once

#include "halfgeo/surface.hpp"

#include <array>
#include <vector>

namespace halfgeo {

/// Subdivided icosahedron projected onto a surface, plus an edge graph used as
/// a distance oracle.
///
/// The graph holds every triangle edge and, for each pair of triangles sharing
/// an edge, the diagonal joining their two opposite vertices. Edge weights are
/// the arc length of a circle of curvature `kappa_bound` through the two
/// endpoints, which bounds the geodesic between them from above whenever the
/// surface's normal curvature stays below `kappa_bound`.
struct SurfaceMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;

  // CSR adjacency
  std::vector<int> offsets;
  std::vector<int> neighbors;
  std::vector<double> weights;

  double h = 0.0;            // requested resolution (max triangle edge)
  double max_edge = 0.0;     // realized max triangle edge (chord)
  int depth = 0;             // icosahedral subdivision depth
  double kappa_bound = 0.0;  // curvature bound used for edge weights
  double distortion = 1.0;   // graph / geodesic ratio measured on the circumscribed sphere

  std::size_t vertex_count() const { return vertices.size(); }
};

struct MeshOptions {
  double min_h = 1e-3;
  double max_h = 0.5;
  int max_depth = 8;
};

/// Throws InvalidArgument for h outside [min_h, max_h] or beyond the depth
/// budget, ResolutionTooCoarse if the edge graph is disconnected.
SurfaceMesh build_mesh(const Surface& s, double h, const MeshOptions& opts = {});

/// Icosahedron subdivided `depth` times and normalized to the unit sphere.
void icosphere(int depth, std::vector<Vec3>& vertices, std::vector<std::array<int, 3>>& triangles);

int nearest_vertex(const SurfaceMesh& mesh, const Vec3& x);

struct GraphPath {
  double length = 0.0;
  std::vector<int> vertices;  // source first
};

/// Single-pair Dijkstra with early exit. Throws Disconnected.
GraphPath shortest_path(const SurfaceMesh& mesh, int source, int target);

/// Single-source Dijkstra to every vertex.
std::vector<double> distances_from(const SurfaceMesh& mesh, int source);

bool is_connected(const SurfaceMesh& mesh);

/// Upper bound on the intrinsic length of a geodesic with curvature at most
/// kappa connecting two points at the given chord distance.
double arc_upper_bound(double chord, double kappa);

}  // namespace halfgeo

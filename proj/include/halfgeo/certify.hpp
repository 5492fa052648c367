#pragma once

#include "halfgeo/closed.hpp"
#include "halfgeo/distance.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace halfgeo {

enum class HalfGeodesicVerdict { HalfGeodesic, Refuted, Inconclusive };
std::string_view to_string(HalfGeodesicVerdict v);

struct AntipodalSample {
  double t = 0.0;
  double distance = 0.0;  // d(gamma(t), gamma(t + L/2))
  double deficit = 0.0;   // L/2 - distance
  DistanceMethod method = DistanceMethod::MeshOracle;
};

/// Whether a closed geodesic minimizes between every pair of points half its
/// prime length apart. Only the s = L/2 pairs are checked: a segment of length
/// L/2 that minimizes has minimizing subsegments.
///
///  - HalfGeodesic: every deficit <= tol
///  - Refuted:      max deficit > 3 tol (witness = argmax)
///  - Inconclusive: otherwise
struct HalfGeodesicCertificate {
  std::string surface;
  std::string label;
  double prime_length = 0.0;
  std::vector<AntipodalSample> samples;
  HalfGeodesicVerdict verdict = HalfGeodesicVerdict::Inconclusive;
  std::optional<double> witness;  // t of the max deficit when not HalfGeodesic
  Vec3 witness_point = Vec3::Zero();
  Vec3 witness_antipode = Vec3::Zero();
  double max_deficit = 0.0;
  double tol = 0.0;
};

struct CertifyOptions {
  int num_samples = 64;
  double tol = 0.0;  // 0 selects 2e-3 * scale
  int jobs = 1;
};

double default_certify_tol(const Surface& s);

HalfGeodesicCertificate certify_half_geodesic(const DistanceEngine& engine, const ClosedGeodesic& cg,
                                              const CertifyOptions& opts = {}, std::string label = {});

/// Coordinate-section certificates for a triaxial ellipsoid.
struct SectionReport {
  double a = 1.0, b = 1.0, c = 1.0;
  HalfGeodesicCertificate x0, y0, z0;
  // Axis endpoint nearest each refuted witness, e.g. "+y" / "-y".
  std::string x0_witness_axis, y0_witness_axis, z0_witness_axis;
  /// Only Z0 is a half-geodesic, and X0 / Y0 fail at the endpoints of their
  /// second axis (y for X0, x for Y0).
  bool matches_single_half_geodesic_pattern = false;
};

struct RecipeBudgets {
  double h = 0.05;
  int num_samples = 64;
  double certify_tol = 0.0;  // 0 selects the default
  ScanPlan scan;
  int random_geodesics = 32;  // for surfaces with continuous families
  std::uint64_t seed = 1;
  int jobs = 1;
};

SectionReport triaxial_section_report(double a, double b, double c, const RecipeBudgets& budgets);
SectionReport triaxial_section_report(const DistanceEngine& engine, const RecipeBudgets& budgets);

/// Closed geodesics used to sample the "all geodesics" side: random great
/// circles on spheres, the equator plus random meridians on oblate
/// ellipsoids, the three coordinate sections on triaxial ellipsoids.
std::vector<std::pair<std::string, ClosedGeodesic>> sampled_closed_geodesics(const Surface& s, int count,
                                                                             std::uint64_t seed, double step = 0.0);

/// Both sides of the Blaschke characterization evaluated numerically.
struct EquivalenceReport {
  ScanReport scan;
  std::vector<HalfGeodesicCertificate> certificates;
  bool blaschke = false;
  bool all_half_geodesics = false;
  bool conclusive = false;  // no Inconclusive verdict on either side
  bool consistent = false;  // blaschke == all_half_geodesics
};

EquivalenceReport blaschke_equivalence_report(const DistanceEngine& engine, const RecipeBudgets& budgets);

/// Assembles an equivalence report from precomputed parts.
EquivalenceReport assemble_equivalence(ScanReport scan, std::vector<HalfGeodesicCertificate> certificates);

}  // namespace halfgeo

#include "halfgeo/certify.hpp"

#include "halfgeo/error.hpp"
#include "halfgeo/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace halfgeo {

std::string_view to_string(HalfGeodesicVerdict v) {
  switch (v) {
    case HalfGeodesicVerdict::HalfGeodesic: return "HalfGeodesic";
    case HalfGeodesicVerdict::Refuted: return "Refuted";
    case HalfGeodesicVerdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

double default_certify_tol(const Surface& s) { return 2e-3 * s.scale(); }

HalfGeodesicCertificate certify_half_geodesic(const DistanceEngine& engine, const ClosedGeodesic& cg,
                                              const CertifyOptions& opts, std::string label) {
  const Surface& s = engine.surface();
  if (opts.num_samples <= 0) throw Error(ErrorCode::InvalidArgument, "certify: num_samples must be positive");
  if (!(cg.prime_length > 0.0) || cg.path.samples.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "certify: closed geodesic has no prime length");
  }
  HalfGeodesicCertificate cert;
  cert.surface = s.name();
  cert.label = std::move(label);
  cert.prime_length = cg.prime_length;
  cert.tol = opts.tol > 0.0 ? opts.tol : default_certify_tol(s);

  const double L = cg.prime_length;
  const double half = 0.5 * L;
  cert.samples.resize(opts.num_samples);
  parallel_for(cert.samples.size(), opts.jobs, [&](std::size_t k) {
    const double t = half * static_cast<double>(k) / opts.num_samples;
    const Vec3 a = sample_periodic(s, cg.path, L, t).x;
    const Vec3 b = sample_periodic(s, cg.path, L, t + half).x;
    const DistanceResult d = engine.distance(a, b);
    cert.samples[k] = {t, d.value, half - d.value, d.method};
  });

  const auto worst = std::max_element(cert.samples.begin(), cert.samples.end(),
                                      [](const AntipodalSample& x, const AntipodalSample& y) { return x.deficit < y.deficit; });
  cert.max_deficit = worst->deficit;
  if (cert.max_deficit <= cert.tol) {
    cert.verdict = HalfGeodesicVerdict::HalfGeodesic;
  } else {
    cert.verdict = cert.max_deficit > 3.0 * cert.tol ? HalfGeodesicVerdict::Refuted : HalfGeodesicVerdict::Inconclusive;
    cert.witness = worst->t;
    cert.witness_point = sample_periodic(s, cg.path, L, worst->t).x;
    cert.witness_antipode = sample_periodic(s, cg.path, L, worst->t + half).x;
  }
  return cert;
}

namespace {

std::string nearest_axis(const Vec3& axes, const Vec3& x) {
  static const char* names[3] = {"x", "y", "z"};
  std::string best;
  double best_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    for (int sign : {1, -1}) {
      const double d = (x - sign * axes[i] * Vec3::Unit(i)).norm();
      if (d < best_d) {
        best_d = d;
        best = std::string(sign > 0 ? "+" : "-") + names[i];
      }
    }
  }
  return best;
}

CertifyOptions certify_options(const Surface& s, const RecipeBudgets& b) {
  CertifyOptions co;
  co.num_samples = b.num_samples;
  co.tol = b.certify_tol > 0.0 ? b.certify_tol : default_certify_tol(s);
  co.jobs = b.jobs;
  return co;
}

}  // namespace

SectionReport triaxial_section_report(const DistanceEngine& engine, const RecipeBudgets& budgets) {
  const Surface& s = engine.surface();
  const auto axes = s.semi_axes();
  if (!axes) throw Error(ErrorCode::InvalidArgument, "section report needs an axis-aligned ellipsoid");
  SectionReport report;
  report.a = (*axes)[0];
  report.b = (*axes)[1];
  report.c = (*axes)[2];
  const CertifyOptions co = certify_options(s, budgets);
  const double step = engine.step();
  report.x0 = certify_half_geodesic(engine, section_geodesic(s, SectionPlane::X0, step), co, "x0");
  report.y0 = certify_half_geodesic(engine, section_geodesic(s, SectionPlane::Y0, step), co, "y0");
  report.z0 = certify_half_geodesic(engine, section_geodesic(s, SectionPlane::Z0, step), co, "z0");
  auto axis_of = [&](const HalfGeodesicCertificate& c) {
    return c.witness ? nearest_axis(*axes, c.witness_point) : std::string();
  };
  report.x0_witness_axis = axis_of(report.x0);
  report.y0_witness_axis = axis_of(report.y0);
  report.z0_witness_axis = axis_of(report.z0);
  auto on_axis = [](const std::string& w, char axis) { return w.size() == 2 && w[1] == axis; };
  report.matches_single_half_geodesic_pattern =
      report.z0.verdict == HalfGeodesicVerdict::HalfGeodesic && report.x0.verdict == HalfGeodesicVerdict::Refuted &&
      report.y0.verdict == HalfGeodesicVerdict::Refuted && on_axis(report.x0_witness_axis, 'y') &&
      on_axis(report.y0_witness_axis, 'x');
  return report;
}

SectionReport triaxial_section_report(double a, double b, double c, const RecipeBudgets& budgets) {
  if (!(a > 0.0 && b > 0.0 && c > 0.0)) throw Error(ErrorCode::InvalidArgument, "semi-axes must be positive");
  if (!(a <= b && b <= c)) throw Error(ErrorCode::InvalidArgument, "expected a <= b <= c (z axis longest)");
  const DistanceEngine engine(Surface::triaxial(a, b, c), budgets.h);
  return triaxial_section_report(engine, budgets);
}

std::vector<std::pair<std::string, ClosedGeodesic>> sampled_closed_geodesics(const Surface& s, int count,
                                                                             std::uint64_t seed, double step) {
  std::vector<std::pair<std::string, ClosedGeodesic>> out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const auto& kind = s.kind();
  const bool round = std::holds_alternative<Sphere>(kind) ||
                     (std::holds_alternative<TriaxialEllipsoid>(kind) && [&] {
                       const auto& t = std::get<TriaxialEllipsoid>(kind);
                       return t.a == t.b && t.b == t.c;
                     }());
  if (round) {
    for (int k = 0; k < count; ++k) {
      Vec3 n(gauss(rng), gauss(rng), gauss(rng));
      out.emplace_back("great-circle-" + std::to_string(k), plane_section_geodesic(s, n, step));
    }
  } else if (std::holds_alternative<OblateEllipsoid>(kind)) {
    out.emplace_back("equator", section_geodesic(s, SectionPlane::Z0, step));
    for (int k = 1; k < count; ++k) {
      const double phi = angle(rng);
      out.emplace_back("meridian-" + std::to_string(k), plane_section_geodesic(s, Vec3(-std::sin(phi), std::cos(phi), 0.0), step));
    }
  } else {
    for (SectionPlane p : {SectionPlane::X0, SectionPlane::Y0, SectionPlane::Z0}) {
      try {
        out.emplace_back(std::string(to_string(p)), section_geodesic(s, p, step));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NotSymmetric) throw;
      }
    }
  }
  return out;
}

EquivalenceReport assemble_equivalence(ScanReport scan, std::vector<HalfGeodesicCertificate> certificates) {
  EquivalenceReport r;
  r.scan = std::move(scan);
  r.certificates = std::move(certificates);
  r.blaschke = r.scan.verdict == BlaschkeVerdict::Blaschke;
  r.all_half_geodesics = !r.certificates.empty() &&
                         std::all_of(r.certificates.begin(), r.certificates.end(), [](const auto& c) {
                           return c.verdict == HalfGeodesicVerdict::HalfGeodesic;
                         });
  const bool any_refuted = std::any_of(r.certificates.begin(), r.certificates.end(),
                                       [](const auto& c) { return c.verdict == HalfGeodesicVerdict::Refuted; });
  // One refuted certificate settles the "all geodesics" side even if others are inconclusive.
  const bool certificates_conclusive = r.all_half_geodesics || any_refuted;
  r.conclusive = r.scan.verdict != BlaschkeVerdict::Inconclusive && certificates_conclusive;
  r.consistent = r.conclusive && r.blaschke == r.all_half_geodesics;
  return r;
}

EquivalenceReport blaschke_equivalence_report(const DistanceEngine& engine, const RecipeBudgets& budgets) {
  const Surface& s = engine.surface();
  const auto closed = sampled_closed_geodesics(s, budgets.random_geodesics, budgets.seed, engine.step());
  ScanPlan plan = budgets.scan;
  plan.jobs = budgets.jobs;
  plan.seed = budgets.seed;
  for (const auto& [name, cg] : closed) plan.closed_geodesic_lengths.push_back(cg.prime_length);
  ScanReport sr = scan(engine, plan);
  const CertifyOptions co = certify_options(s, budgets);
  std::vector<HalfGeodesicCertificate> certs;
  for (const auto& [name, cg] : closed) certs.push_back(certify_half_geodesic(engine, cg, co, name));
  return assemble_equivalence(std::move(sr), std::move(certs));
}

}  // namespace halfgeo

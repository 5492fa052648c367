#include "halfgeo/report_json.hpp"

#include <cmath>

namespace halfgeo {

Json vec_to_json(const Vec3& v) { return Json::array({v[0], v[1], v[2]}); }

Json scan_to_json(const std::string& surface, const ScanReport& r, const SurfaceMesh& mesh) {
  Json j;
  j["surface"] = surface;
  j["diameter_est"] = r.diameter_est;
  j["inj_est"] = r.inj_est;
  j["cut_times"] = {{"min", r.cut_time_min}, {"max", r.cut_time_max}, {"mean", r.cut_time_mean}, {"count", r.cut_time_count}};
  j["blaschke_verdict"] = std::string(to_string(r.verdict));
  j["tol"] = r.tol;
  j["mesh"] = {{"h", mesh.h}, {"vertices", mesh.vertex_count()}, {"distortion", mesh.distortion}};
  j["conjugate_radius"] = r.conjugate_radius;
  if (std::isfinite(r.half_shortest_closed)) {
    j["half_shortest_closed_geodesic"] = r.half_shortest_closed;
  } else {
    j["half_shortest_closed_geodesic"] = nullptr;
  }
  j["diameter_pair"] = Json::array({vec_to_json(r.diameter_p), vec_to_json(r.diameter_q)});
  return j;
}

Json certificate_to_json(const HalfGeodesicCertificate& c) {
  Json j;
  j["surface"] = c.surface;
  if (!c.label.empty()) j["geodesic"] = c.label;
  j["prime_length"] = c.prime_length;
  j["tol"] = c.tol;
  Json samples = Json::array();
  for (const auto& s : c.samples) samples.push_back({{"t", s.t}, {"d", s.distance}, {"deficit", s.deficit}});
  j["samples"] = std::move(samples);
  j["verdict"] = std::string(to_string(c.verdict));
  if (c.witness) {
    j["witness"] = *c.witness;
  } else {
    j["witness"] = nullptr;
  }
  j["max_deficit"] = c.max_deficit;
  return j;
}

Json section_report_to_json(const SectionReport& r) {
  Json j;
  j["params"] = Json::array({r.a, r.b, r.c});
  j["x0"] = certificate_to_json(r.x0);
  j["x0"]["witness_axis"] = r.x0_witness_axis;
  j["y0"] = certificate_to_json(r.y0);
  j["y0"]["witness_axis"] = r.y0_witness_axis;
  j["z0"] = certificate_to_json(r.z0);
  j["z0"]["witness_axis"] = r.z0_witness_axis;
  j["only_z0_half_geodesic"] = r.matches_single_half_geodesic_pattern;
  return j;
}

Json equivalence_to_json(const std::string& surface, const EquivalenceReport& r, const SurfaceMesh& mesh) {
  Json j;
  j["surface"] = surface;
  j["scan"] = scan_to_json(surface, r.scan, mesh);
  Json certs = Json::array();
  for (const auto& c : r.certificates) {
    certs.push_back({{"geodesic", c.label},
                     {"prime_length", c.prime_length},
                     {"verdict", std::string(to_string(c.verdict))},
                     {"max_deficit", c.max_deficit}});
  }
  j["certificates"] = std::move(certs);
  j["blaschke"] = r.blaschke;
  j["all_half_geodesics"] = r.all_half_geodesics;
  j["conclusive"] = r.conclusive;
  j["consistent"] = r.consistent;
  return j;
}

Json distance_to_json(const DistanceResult& d) {
  return {{"value", d.value},
          {"method", std::string(to_string(d.method))},
          {"lower_bound", d.lower_bound},
          {"upper_bound", d.upper_bound}};
}

}  // namespace halfgeo

#pragma once

#include "halfgeo/certify.hpp"
#include "halfgeo/distance.hpp"

#include "json.hpp"

namespace halfgeo {

using Json = nlohmann::ordered_json;

/// {surface, diameter_est, inj_est, cut_times:{min,max,mean,count},
///  blaschke_verdict, tol, mesh:{h, vertices, distortion}} plus diagnostics.
Json scan_to_json(const std::string& surface, const ScanReport& report, const SurfaceMesh& mesh);

/// {surface, prime_length, tol, samples:[{t, d, deficit}], verdict, witness}
Json certificate_to_json(const HalfGeodesicCertificate& cert);

Json section_report_to_json(const SectionReport& report);
Json equivalence_to_json(const std::string& surface, const EquivalenceReport& report, const SurfaceMesh& mesh);
Json distance_to_json(const DistanceResult& d);
Json vec_to_json(const Vec3& v);

}  // namespace halfgeo

// halfgeo: command-line front end.
//
//   halfgeo geodesic --surface S --point x,y,z --dir vx,vy,vz --length L
//   halfgeo distance --surface S --p x,y,z --q x,y,z
//   halfgeo closed   --surface S --loop section:z0 | file:path.csv
//   halfgeo certify  --surface S --loop ...
//   halfgeo scan     --surface S
//   halfgeo paper    thm1 | ex2_2 | ex2_4 [--params ...]
//
// Exit codes: 0 success, 1 recipe mismatch, 2 numerical or usage error.

#include "halfgeo/catalog.hpp"
#include "halfgeo/certify.hpp"
#include "halfgeo/closed.hpp"
#include "halfgeo/distance.hpp"
#include "halfgeo/error.hpp"
#include "halfgeo/geodesic.hpp"
#include "halfgeo/jacobi.hpp"
#include "halfgeo/parallel.hpp"
#include "halfgeo/report_json.hpp"

#include "CLI11.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

using namespace halfgeo;

namespace {

constexpr int kExitMismatch = 1;
constexpr int kExitError = 2;

struct RunConfig {
  std::string surface = "sphere:1";
  std::string catalog;
  double h = 0.05;
  double step = 0.0;  // 0: 1e-3 * scale
  double tol = 0.0;   // 0: command default
  int samples = 0;    // 0: command default
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";
  int jobs = 1;

  std::string point, dir, p, q;
  double length = 0.0;
  std::string loop = "section:z0";
  std::string params;
  int directions = 4;
  int diameter_points = 120;
  int geodesics = 32;
  std::string example;
};

// Raised for flag values that parse but make no sense.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Surface surface_of(const RunConfig& cfg) {
  std::vector<Surface> catalog;
  if (!cfg.catalog.empty()) catalog = load_catalog(cfg.catalog);
  return resolve_surface(cfg.surface, catalog);
}

double step_of(const RunConfig& cfg, const Surface& s) { return cfg.step > 0.0 ? cfg.step : 1e-3 * s.scale(); }

DistanceEngine engine_of(const RunConfig& cfg, const Surface& s) {
  DistanceOptions opts;
  opts.step = step_of(cfg, s);
  return DistanceEngine(s, cfg.h, opts);
}

Vec3 vec_arg(const std::string& text, const char* flag) {
  if (text.empty()) throw UsageError(std::string(flag) + " is required (format x,y,z)");
  const auto v = parse_number_list(text);
  if (v.size() != 3) throw UsageError(std::string(flag) + " needs exactly three numbers, got '" + text + "'");
  return Vec3(v[0], v[1], v[2]);
}

// Write to --out or stdout.
void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream os(cfg.out, std::ios::binary);
  if (!os) throw Error(ErrorCode::Io, "cannot write '" + cfg.out + "'");
  os << text;
  if (!os) throw Error(ErrorCode::Io, "write failed for '" + cfg.out + "'");
}

void emit_json(const RunConfig& cfg, const Json& j) { emit(cfg, j.dump(2) + "\n"); }

// Shortest round-trip decimal.
std::string num(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

// CSV field, quoted when it holds a separator (surface names do).
std::string field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string q = "\"";
  for (char ch : text) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

// --- loops ---------------------------------------------------------------

ClosedGeodesic loop_of(const RunConfig& cfg, const Surface& s) {
  const double step = step_of(cfg, s);
  const auto colon = cfg.loop.find(':');
  const std::string kind = cfg.loop.substr(0, colon);
  const std::string arg = colon == std::string::npos ? std::string() : cfg.loop.substr(colon + 1);
  if (kind == "section") {
    if (arg.empty()) throw UsageError("--loop section:<x0|y0|z0>");
    return section_geodesic(s, parse_section_plane(arg), step);
  }
  if (kind == "file") {
    if (arg.empty()) throw UsageError("--loop file:<path.csv>");
    const GeodesicPath path = read_csv_file(arg);
    ClosedGeodesic cg = close_geodesic(s, path.start(), path.direction(), path.length(), step);
    const double prime = prime_length(s, cg, ClosureTolerance{}.position, step);
    if (prime < cg.prime_length) cg = make_closed_geodesic(s, cg.start(), cg.direction(), prime, step);
    return cg;
  }
  throw UsageError("unknown loop selector '" + cfg.loop + "' (use section:x0|y0|z0 or file:<path>)");
}

// --- subcommands -----------------------------------------------------------

int cmd_geodesic(const RunConfig& cfg) {
  const Surface s = surface_of(cfg);
  if (!(cfg.length > 0.0)) throw UsageError("--length must be positive");
  const Vec3 p = project_to_surface(s, vec_arg(cfg.point, "--point"));
  const Vec3 v = tangent_project(s, p, vec_arg(cfg.dir, "--dir"));
  if (v.norm() == 0.0) throw UsageError("--dir is normal to the surface at --point");
  ShootOptions so;
  so.step = step_of(cfg, s);
  const GeodesicPath path = shoot(s, p, v.normalized(), cfg.length, so);
  if (cfg.format == "csv") {
    std::ostringstream os;
    write_csv(os, path);
    emit(cfg, os.str());
    return 0;
  }
  const IndexReport idx = jacobi_index(s, path);
  Json conj = Json::array();
  for (const auto& c : idx.conjugate_times) conj.push_back(c.t);
  Json j;
  j["surface"] = s.name();
  j["start"] = vec_to_json(path.start());
  j["direction"] = vec_to_json(path.direction());
  j["length"] = path.length();
  j["end"] = vec_to_json(path.end().x);
  j["end_velocity"] = vec_to_json(path.end().v);
  j["samples"] = path.samples.size();
  j["speed_drift"] = path.speed_drift;
  j["conjugate_times"] = std::move(conj);
  j["index"] = idx.index;
  emit_json(cfg, j);
  return 0;
}

int cmd_distance(const RunConfig& cfg) {
  const Surface s = surface_of(cfg);
  const Vec3 p = project_to_surface(s, vec_arg(cfg.p, "--p"));
  const Vec3 q = project_to_surface(s, vec_arg(cfg.q, "--q"));
  const DistanceEngine engine = engine_of(cfg, s);
  const DistanceResult d = engine.distance(p, q);
  if (cfg.format == "csv") {
    emit(cfg, "value,method,lower_bound,upper_bound\n" + num(d.value) + "," + std::string(to_string(d.method)) + "," +
                  num(d.lower_bound) + "," + num(d.upper_bound) + "\n");
    return 0;
  }
  Json j;
  j["surface"] = s.name();
  j["p"] = vec_to_json(p);
  j["q"] = vec_to_json(q);
  j.update(distance_to_json(d));
  emit_json(cfg, j);
  return 0;
}

int cmd_closed(const RunConfig& cfg) {
  const Surface s = surface_of(cfg);
  const ClosedGeodesic cg = loop_of(cfg, s);
  std::ostringstream sidecar;
  write_sidecar(sidecar, cg);
  if (cfg.format == "json") {
    emit(cfg, sidecar.str());
    return 0;
  }
  std::ostringstream os;
  write_csv(os, cg.path);
  emit(cfg, os.str());
  if (!cfg.out.empty()) {
    RunConfig side = cfg;
    side.out = cfg.out + ".json";
    emit(side, sidecar.str());
  }
  return 0;
}

std::string certificate_csv(const HalfGeodesicCertificate& c) {
  std::string text = "t,d,deficit,method\n";
  for (const auto& smp : c.samples) {
    text += num(smp.t) + "," + num(smp.distance) + "," + num(smp.deficit) + "," + std::string(to_string(smp.method)) + "\n";
  }
  return text;
}

CertifyOptions certify_options(const RunConfig& cfg) {
  CertifyOptions co;
  if (cfg.samples > 0) co.num_samples = cfg.samples;
  co.tol = cfg.tol;
  co.jobs = cfg.jobs;
  return co;
}

int cmd_certify(const RunConfig& cfg) {
  const Surface s = surface_of(cfg);
  const ClosedGeodesic cg = loop_of(cfg, s);
  const DistanceEngine engine = engine_of(cfg, s);
  const auto cert = certify_half_geodesic(engine, cg, certify_options(cfg), cfg.loop);
  emit(cfg, cfg.format == "csv" ? certificate_csv(cert) : certificate_to_json(cert).dump(2) + "\n");
  return 0;
}

std::string scan_csv(const std::string& surface, const ScanReport& r, const SurfaceMesh& m) {
  return "surface,diameter_est,inj_est,cut_min,cut_max,cut_mean,cut_count,conjugate_radius,blaschke_verdict,tol,"
         "mesh_h,mesh_vertices,mesh_distortion\n" +
         field(surface) + "," + num(r.diameter_est) + "," + num(r.inj_est) + "," + num(r.cut_time_min) + "," +
         num(r.cut_time_max) + "," + num(r.cut_time_mean) + "," + std::to_string(r.cut_time_count) + "," +
         num(r.conjugate_radius) + "," + std::string(to_string(r.verdict)) + "," + num(r.tol) + "," + num(m.h) + "," +
         std::to_string(m.vertex_count()) + "," + num(m.distortion) + "\n";
}

ScanPlan scan_plan(const RunConfig& cfg) {
  ScanPlan plan;
  if (cfg.samples > 0) plan.point_samples = cfg.samples;
  if (cfg.tol > 0.0) plan.cut_tol = cfg.tol;
  plan.direction_samples = cfg.directions;
  plan.diameter_points = cfg.diameter_points;
  plan.seed = cfg.seed;
  plan.jobs = cfg.jobs;
  return plan;
}

int cmd_scan(const RunConfig& cfg) {
  const Surface s = surface_of(cfg);
  const DistanceEngine engine = engine_of(cfg, s);
  ScanPlan plan = scan_plan(cfg);
  for (const auto& [name, cg] : sampled_closed_geodesics(s, cfg.geodesics, cfg.seed, engine.step())) {
    plan.closed_geodesic_lengths.push_back(cg.prime_length);
  }
  const ScanReport r = scan(engine, plan);
  emit(cfg, cfg.format == "csv" ? scan_csv(s.name(), r, engine.mesh())
                                : scan_to_json(s.name(), r, engine.mesh()).dump(2) + "\n");
  return 0;
}

// --- recipes ---------------------------------------------------------------

RecipeBudgets budgets_of(const RunConfig& cfg) {
  RecipeBudgets b;
  b.h = cfg.h;
  if (cfg.samples > 0) b.num_samples = cfg.samples;
  b.certify_tol = cfg.tol;
  b.random_geodesics = cfg.geodesics;
  b.seed = cfg.seed;
  b.jobs = cfg.jobs;
  b.scan.direction_samples = cfg.directions;
  b.scan.diameter_points = cfg.diameter_points;
  return b;
}

std::vector<double> params_or(const RunConfig& cfg, std::vector<double> fallback) {
  if (cfg.params.empty()) return fallback;
  auto v = parse_number_list(cfg.params);
  if (v.size() != fallback.size()) {
    throw UsageError("--params for " + cfg.example + " needs " + std::to_string(fallback.size()) + " value(s)");
  }
  return v;
}

std::string cert_row(const std::string& surface, const HalfGeodesicCertificate& c) {
  return field(surface) + "," + field(c.label) + "," + num(c.prime_length) + "," + std::string(to_string(c.verdict)) + "," +
         num(c.max_deficit) + "," + num(c.tol) + "," + (c.witness ? num(*c.witness) : std::string()) + "\n";
}

const char* kCertHeader = "surface,geodesic,prime_length,verdict,max_deficit,tol,witness\n";

int paper_ex2_2(const RunConfig& cfg) {
  const auto abc = params_or(cfg, {1.0, 1.05, 1.1});
  if (!(abc[0] <= abc[1] && abc[1] <= abc[2])) throw UsageError("ex2_2 expects a <= b <= c (z axis longest)");
  const Surface s = Surface::triaxial(abc[0], abc[1], abc[2]);
  const RecipeBudgets b = budgets_of(cfg);
  DistanceOptions opts;
  opts.step = step_of(cfg, s);
  const DistanceEngine engine(s, b.h, opts);
  const SectionReport r = triaxial_section_report(engine, b);
  // Z0 is a half-geodesic for every nearly round triaxial ellipsoid; the X0 / Y0
  // refutations are recorded, not gated.
  const bool match = r.z0.verdict == HalfGeodesicVerdict::HalfGeodesic;
  if (cfg.format == "csv") {
    emit(cfg, std::string(kCertHeader) + cert_row(s.name(), r.x0) + cert_row(s.name(), r.y0) + cert_row(s.name(), r.z0));
  } else {
    Json j;
    j["recipe"] = "ex2_2";
    j["surface"] = s.name();
    j.update(section_report_to_json(r));
    j["matches_paper"] = match;
    emit_json(cfg, j);
  }
  return match ? 0 : kExitMismatch;
}

int paper_ex2_4(const RunConfig& cfg) {
  const double c = params_or(cfg, {0.8})[0];
  const Surface s = Surface::oblate(c);
  const RecipeBudgets b = budgets_of(cfg);
  DistanceOptions opts;
  opts.step = step_of(cfg, s);
  const DistanceEngine engine(s, b.h, opts);
  const ClosedGeodesic meridian = section_geodesic(s, SectionPlane::X0, engine.step());
  const ClosedGeodesic equator = section_geodesic(s, SectionPlane::Z0, engine.step());
  CertifyOptions co;
  co.num_samples = b.num_samples;
  co.tol = b.certify_tol;
  co.jobs = b.jobs;
  const auto mcert = certify_half_geodesic(engine, meridian, co, "meridian");
  const auto ecert = certify_half_geodesic(engine, equator, co, "equator");
  ScanPlan plan = scan_plan(cfg);
  plan.closed_geodesic_lengths = {meridian.prime_length, equator.prime_length};
  const ScanReport sr = scan(engine, plan);
  const bool match = mcert.verdict == HalfGeodesicVerdict::HalfGeodesic &&
                     ecert.verdict == HalfGeodesicVerdict::Refuted && sr.verdict == BlaschkeVerdict::NotBlaschke;
  if (cfg.format == "csv") {
    emit(cfg, std::string(kCertHeader) + cert_row(s.name(), mcert) + cert_row(s.name(), ecert));
  } else {
    Json j;
    j["recipe"] = "ex2_4";
    j["surface"] = s.name();
    j["meridian"] = certificate_to_json(mcert);
    j["meridian"]["perimeter_quadrature"] = section_perimeter(s, Vec3::UnitX());
    j["equator"] = certificate_to_json(ecert);
    j["equator"]["expected_deficit"] = 0.5 * equator.prime_length - sr.diameter_est;
    j["scan"] = scan_to_json(s.name(), sr, engine.mesh());
    j["matches_paper"] = match;
    emit_json(cfg, j);
  }
  return match ? 0 : kExitMismatch;
}

int paper_thm1(const RunConfig& cfg, bool surface_given) {
  std::vector<Surface> surfaces;
  if (surface_given) {
    surfaces.push_back(surface_of(cfg));
  } else {
    surfaces = {Surface::sphere(1.0), Surface::oblate(0.8), Surface::triaxial(1.0, 1.05, 1.1)};
  }
  const RecipeBudgets b = budgets_of(cfg);
  bool all_consistent = true;
  Json reports = Json::array();
  std::string csv = "surface,blaschke_verdict,all_half_geodesics,conclusive,consistent\n";
  for (const Surface& s : surfaces) {
    DistanceOptions opts;
    opts.step = step_of(cfg, s);
    const DistanceEngine engine(s, b.h, opts);
    const EquivalenceReport r = blaschke_equivalence_report(engine, b);
    all_consistent = all_consistent && r.consistent;
    reports.push_back(equivalence_to_json(s.name(), r, engine.mesh()));
    csv += field(s.name()) + "," + std::string(to_string(r.scan.verdict)) + "," + (r.all_half_geodesics ? "true" : "false") +
           "," + (r.conclusive ? "true" : "false") + "," + (r.consistent ? "true" : "false") + "\n";
  }
  if (cfg.format == "csv") {
    emit(cfg, csv);
  } else {
    Json j;
    j["recipe"] = "thm1";
    j["reports"] = std::move(reports);
    j["consistent"] = all_consistent;
    emit_json(cfg, j);
  }
  return all_consistent ? 0 : kExitMismatch;
}

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->set_help_flag("--help", "print this help");  // -h would shadow --h
  cmd->add_option("--surface", cfg.surface, "sphere:r | oblate:c | triaxial:a,b,c | catalog name");
  cmd->add_option("--catalog", cfg.catalog, "JSON surface catalog")->check(CLI::ExistingFile);
  cmd->add_option("--h", cfg.h, "mesh resolution (max triangle edge)")->check(CLI::PositiveNumber);
  cmd->add_option("--step", cfg.step, "integrator step (default 1e-3 * scale)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", cfg.seed, "RNG seed for sampling plans");
  cmd->add_option("--out", cfg.out, "output file (default stdout)");
  cmd->add_option("--format", cfg.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--jobs", cfg.jobs, "worker threads (default $HALFGEO_JOBS, else hardware threads)")->check(CLI::PositiveNumber);
}

void add_budgets(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--tol", cfg.tol, "certificate deficit tolerance (default 2e-3 * scale)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--samples", cfg.samples, "antipodal samples per certificate (default 64)")->check(CLI::NonNegativeNumber);
}

void add_scan_budgets(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--directions", cfg.directions, "directions per base point in the cut-time plan")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--diameter-points", cfg.diameter_points, "points in the all-pairs diameter search")
      ->check(CLI::Range(2, 100000));
  cmd->add_option("--geodesics", cfg.geodesics, "sampled closed geodesics on surfaces with families")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  cfg.jobs = default_jobs();

  CLI::App app{"halfgeo: half-geodesics, cut times, injectivity radius and diameter on convex surfaces"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print this help");

  auto* geo = app.add_subcommand("geodesic", "shoot a unit-speed geodesic (json summary or csv samples)");
  add_common(geo, cfg);
  geo->add_option("--point", cfg.point, "start point x,y,z (projected to the surface)");
  geo->add_option("--dir", cfg.dir, "initial direction (projected to the tangent plane, normalized)");
  geo->add_option("--length", cfg.length, "geodesic length")->required();

  auto* dist = app.add_subcommand("distance", "intrinsic distance between two points");
  add_common(dist, cfg);
  dist->add_option("--p", cfg.p, "first point x,y,z")->required();
  dist->add_option("--q", cfg.q, "second point x,y,z")->required();

  auto* closed = app.add_subcommand("closed", "closed geodesic: csv samples (+ .json sidecar) or json sidecar");
  add_common(closed, cfg);
  closed->add_option("--loop", cfg.loop, "section:x0|y0|z0 or file:<path.csv>");

  auto* cert = app.add_subcommand("certify", "half-geodesic certificate for a closed geodesic");
  add_common(cert, cfg);
  add_budgets(cert, cfg);
  cert->add_option("--loop", cfg.loop, "section:x0|y0|z0 or file:<path.csv>");

  auto* sc = app.add_subcommand("scan", "diameter, cut times, injectivity radius and Blaschke verdict");
  add_common(sc, cfg);
  sc->add_option("--tol", cfg.tol, "cut-time tolerance relative to scale (default 1e-3)")->check(CLI::NonNegativeNumber);
  sc->add_option("--samples", cfg.samples, "base points in the cut-time plan (default 16)")->check(CLI::NonNegativeNumber);
  add_scan_budgets(sc, cfg);

  auto* paper = app.add_subcommand("paper", "packaged recipes: thm1, ex2_2, ex2_4");
  add_common(paper, cfg);
  add_budgets(paper, cfg);
  add_scan_budgets(paper, cfg);
  paper->add_option("example", cfg.example, "thm1 | ex2_2 | ex2_4")
      ->required()
      ->check(CLI::IsMember({"thm1", "ex2_2", "ex2_4"}));
  paper->add_option("--params", cfg.params, "ex2_2: a,b,c (default 1,1.05,1.1); ex2_4: c (default 0.8)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (name == "geodesic") return cmd_geodesic(cfg);
    if (name == "distance") return cmd_distance(cfg);
    if (name == "closed") return cmd_closed(cfg);
    if (name == "certify") return cmd_certify(cfg);
    if (name == "scan") return cmd_scan(cfg);
    if (cfg.example == "thm1") return paper_thm1(cfg, paper->count("--surface") > 0);
    if (cfg.example == "ex2_2") return paper_ex2_2(cfg);
    return paper_ex2_4(cfg);
  } catch (const UsageError& e) {
    std::cerr << "halfgeo " << name << ": usage: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "halfgeo " << name << ": " << e.what() << "\n";
  }
  return kExitError;
}

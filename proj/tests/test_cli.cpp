#include "doctest.h"
#include "json.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(HALFGEO_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string& name) {
  std::ifstream is(name, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

const char* kQuickScan = "--h 0.1 --samples 4 --directions 2 --diameter-points 40";

}  // namespace

TEST_CASE("certify the oblate meridian") {
  const Run r = run("certify --surface oblate:0.8 --loop section:x0");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["verdict"] == "HalfGeodesic");
  CHECK(j["samples"].size() == 64);
  CHECK(j["prime_length"].get<double>() == doctest::Approx(5.672333578).epsilon(1e-8));
}

TEST_CASE("paper ex2_2") {
  const Run r = run("paper ex2_2 --params 1,1.05,1.1");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["only_z0_half_geodesic"] == true);
  CHECK(j["z0"]["verdict"] == "HalfGeodesic");
  CHECK(j["x0"]["verdict"] == "Refuted");
  CHECK(j["y0"]["verdict"] == "Refuted");
  CHECK(j["matches_paper"] == true);
}

TEST_CASE("scan the round sphere") {
  const Run r = run(std::string("scan --surface sphere:1 ") + kQuickScan);
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["blaschke_verdict"] == "Blaschke");
}

TEST_CASE("recipe mismatch exits 1") {
  // a tolerance above the equator deficit certifies the equator, contradicting the example
  const Run r = run(std::string("paper ex2_4 --tol 1 ") + kQuickScan);
  CHECK(r.code == 1);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["equator"]["verdict"] == "HalfGeodesic");
  CHECK(j["matches_paper"] == false);
}

TEST_CASE("numerical and usage errors exit 2") {
  CHECK(run("distance --surface torus:1 --p 1,0,0 --q 0,1,0").code == 2);
  CHECK(run("distance --surface oblate:1.5 --p 1,0,0 --q 0,1,0").code == 2);
  CHECK(run("distance --p 1,0 --q 0,1,0").code == 2);
  CHECK(run("certify --loop section:w0").code == 2);
  CHECK(run("certify --loop file:/no/such.csv").code == 2);
  CHECK(run("certify --surface sphere:1 --loop bogus").code == 2);
  CHECK(run("scan --format xml").code == 2);
  CHECK(run("paper ex9").code == 2);
  CHECK(run("").code == 2);
  CHECK(run("--help").code == 0);
}

TEST_CASE("geodesic output formats") {
  const Run csv = run("geodesic --surface sphere:1 --point 2,0,0 --dir 0,1,0 --length 1 --step 0.1 --format csv");
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("t,x,y,z,vx,vy,vz\n", 0) == 0);
  CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 12);

  const Run json = run("geodesic --surface sphere:1 --point 1,0,0 --dir 0,1,0 --length 3.2");
  REQUIRE(json.code == 0);
  const auto j = nlohmann::json::parse(json.out);
  CHECK(j["index"] == 1);
  CHECK(j["conjugate_times"][0].get<double>() == doctest::Approx(3.14159265).epsilon(1e-7));
}

TEST_CASE("distance formats") {
  const Run j = run("distance --surface sphere:1 --p 1,0,0 --q 0,0,1");
  REQUIRE(j.code == 0);
  CHECK(nlohmann::json::parse(j.out)["value"].get<double>() == doctest::Approx(1.5707963268).epsilon(1e-9));
  const Run c = run("distance --surface sphere:1 --p 1,0,0 --q 0,0,1 --format csv");
  REQUIRE(c.code == 0);
  CHECK(c.out.rfind("value,method,lower_bound,upper_bound\n1.57079632", 0) == 0);
}

TEST_CASE("closed loops round-trip through files") {
  const Run c = run("closed --surface triaxial:1,1.05,1.1 --loop section:y0 --format csv --out cli_y0.csv");
  REQUIRE(c.code == 0);
  const auto side = nlohmann::json::parse(slurp("cli_y0.csv.json"));
  CHECK(side["prime_length"].get<double>() == doctest::Approx(6.601085094).epsilon(1e-9));
  CHECK(side["closure_residual"].get<double>() < 1e-8);

  const Run a = run("certify --surface triaxial:1,1.05,1.1 --h 0.1 --samples 8 --loop file:cli_y0.csv");
  const Run b = run("certify --surface triaxial:1,1.05,1.1 --h 0.1 --samples 8 --loop section:y0");
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  const auto ja = nlohmann::json::parse(a.out), jb = nlohmann::json::parse(b.out);
  CHECK(ja["verdict"] == "Refuted");
  CHECK(ja["verdict"] == jb["verdict"]);
  CHECK(ja["prime_length"].get<double>() == doctest::Approx(jb["prime_length"].get<double>()).epsilon(1e-9));
  std::remove("cli_y0.csv");
  std::remove("cli_y0.csv.json");
}

TEST_CASE("identical config gives identical bytes") {
  const std::string args = std::string("scan --surface triaxial:1,1.05,1.1 --seed 5 ") + kQuickScan;
  REQUIRE(run(args + " --out cli_a.json").code == 0);
  REQUIRE(run(args + " --out cli_b.json --jobs 3").code == 0);
  const std::string a = slurp("cli_a.json");
  CHECK(!a.empty());
  CHECK(a == slurp("cli_b.json"));
  std::remove("cli_a.json");
  std::remove("cli_b.json");

  const Run c1 = run("certify --surface oblate:0.8 --loop section:z0 --h 0.1 --samples 8 --format csv");
  const Run c2 = run("certify --surface oblate:0.8 --loop section:z0 --h 0.1 --samples 8 --format csv");
  CHECK(c1.out == c2.out);
  CHECK(c1.out.rfind("t,d,deficit,method\n", 0) == 0);
}

TEST_CASE("catalog surfaces") {
  const Run r = run("distance --catalog " HALFGEO_DATA_DIR "/surfaces.json --surface ex2_4 --p 0,0,1 --q 0,0,-1");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["surface"] == "ex2_4");
  CHECK(j["value"].get<double>() == doctest::Approx(2.836166789).epsilon(1e-8));
}

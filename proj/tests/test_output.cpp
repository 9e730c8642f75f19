#include "test_main.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <unistd.h>

#include "rvprd/errors.hpp"
#include "rvprd/output.hpp"
#include "rvprd/picard.hpp"

using namespace rvprd;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("rvprd-test-output-" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

MomentRecord sample_record(double t) {
  MomentRecord r;
  r.t = t;
  r.M = 0.1 + t / 3.0;
  r.dip.t = t;
  r.dip.D = {1.0 / 7.0, -2e-300, 3.5};
  r.dip.D1 = {t, t * t, -t};
  r.dip.D2 = {std::nextafter(1.0, 2.0), 0.0, -0.0};
  r.dip.D3 = {1e-20, 2e20, 3.0};
  r.ekin = 4.9e-4;
  r.efield = 5.9e-7;
  r.eschott = r.ekin + r.efield;
  r.maxx = 0.975;
  r.maxp = 0.9824;
  return r;
}

}  // namespace

TEST_CASE("empty record list writes the header only") {
  TempDir d;
  write_moments_csv(d.path / "m.csv", {});
  CHECK(slurp(d.path / "m.csv") ==
        "t,M,Dx,Dy,Dz,D1x,D1y,D1z,D2x,D2y,D2z,D3x,D3y,D3z,Ekin,Efield,Eschott,maxx,maxp\n");
}

TEST_CASE("moments round-trip exactly") {
  TempDir d;
  std::vector<MomentRecord> recs{sample_record(0.0), sample_record(0.1), sample_record(1.0 / 3.0)};
  write_moments_csv(d.path / "sub" / "m.csv", recs);
  CHECK(read_moments_csv(d.path / "sub" / "m.csv") == recs);
}

TEST_CASE("every check line is a standalone JSON object") {
  TempDir d;
  std::vector<CheckResult> checks{{"a", true, 0.0, std::nullopt, ""}, {"b", false, 1.5, 2.0, "x"}};
  write_checks_ndjson(d.path / "c.ndjson", checks);
  std::ifstream in(d.path / "c.ndjson");
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    auto j = nlohmann::json::parse(line);
    CHECK(j.is_object());
    ++n;
  }
  CHECK(n == 2);
}

TEST_CASE("envelope table starts at R0 and carries a") {
  TempDir d;
  SupportEnvelope env = support_envelope(0.004, 0.01, 1.0);
  write_envelope_csv(d.path / "e.csv", env, 0.5 * env.a, 10);
  std::ifstream in(d.path / "e.csv");
  std::string a_line, header, first;
  std::getline(in, a_line);
  std::getline(in, header);
  std::getline(in, first);
  CHECK(a_line.rfind("# a=", 0) == 0);
  CHECK(std::stod(a_line.substr(4)) == env.a);
  CHECK(header == "t,P,X");
  CHECK(first == "0,1,1");
}

TEST_CASE("picard table has one row per iteration") {
  TempDir d;
  PicardReport r;
  r.alpha = {0.3, 1e-4, 1e-8};
  r.field_diff = {1.0, 2.0, 3.0};
  r.d3_diff = {0.0, 0.0, 0.0};
  write_picard_csv(d.path / "p.csv", r);
  std::string text = slurp(d.path / "p.csv");
  CHECK(text.rfind("n,alpha,field_diff,d3_diff\n1,", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
}

TEST_CASE("snapshots round-trip with their sidecar") {
  TempDir d;
  GridSpec g{1.5, 8};
  VectorField f(g);
  for (std::size_t i = 0; i < g.size(); ++i) f.set(i, {double(i), -double(i), 0.5 * i});
  write_snapshot(d.path / "E", f, 0.25);
  Snapshot s = read_snapshot(d.path / "E");
  CHECK(s.grid == g);
  CHECK(s.components == 3);
  CHECK(s.time == 0.25);
  REQUIRE(s.data.size() == 3 * g.size());
  CHECK(s.data[3 * 5 + 1] == -5.0);
  CHECK(fs::file_size(d.path / "E.bin") == 3 * g.size() * sizeof(double));
}

TEST_CASE("I/O errors name the path") {
  TempDir d;
  write_text(d.path / "blocker", "x");
  try {
    write_moments_csv(d.path / "blocker" / "m.csv", {});
    FAIL("wrote below a regular file");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("blocker") != std::string::npos);
  }
}

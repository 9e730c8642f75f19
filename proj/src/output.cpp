#include "rvprd/output.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "rvprd/errors.hpp"

namespace rvprd {

const char* const kMomentsHeader =
    "t,M,Dx,Dy,Dz,D1x,D1y,D1z,D2x,D2y,D2z,D3x,D3y,D3z,Ekin,Efield,Eschott,maxx,maxp";

namespace {

void append(std::string& s, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  if (!s.empty()) s += ',';
  s += buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error("cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace

std::string moments_row(const MomentRecord& r) {
  std::string s;
  append(s, r.t);
  append(s, r.M);
  for (const Vec3* v : {&r.dip.D, &r.dip.D1, &r.dip.D2, &r.dip.D3}) {
    append(s, v->x);
    append(s, v->y);
    append(s, v->z);
  }
  append(s, r.ekin);
  append(s, r.efield);
  append(s, r.eschott);
  append(s, r.maxx);
  append(s, r.maxp);
  return s;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  finish(out, path);
}

void write_moments_csv(const std::filesystem::path& path, const std::vector<MomentRecord>& records) {
  auto out = open_out(path);
  out << kMomentsHeader << '\n';
  for (const auto& r : records) out << moments_row(r) << '\n';
  finish(out, path);
}

std::vector<MomentRecord> read_moments_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kMomentsHeader) throw Error(path.string() + ": unexpected header");
  std::vector<MomentRecord> out;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        v.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error(path.string() + ":" + std::to_string(row) + ": bad number '" + cell + "'");
      }
    }
    if (v.size() != 19) throw Error(path.string() + ":" + std::to_string(row) + ": expected 19 columns");
    MomentRecord r;
    r.t = v[0];
    r.M = v[1];
    r.dip.t = v[0];
    r.dip.D = {v[2], v[3], v[4]};
    r.dip.D1 = {v[5], v[6], v[7]};
    r.dip.D2 = {v[8], v[9], v[10]};
    r.dip.D3 = {v[11], v[12], v[13]};
    r.ekin = v[14];
    r.efield = v[15];
    r.eschott = v[16];
    r.maxx = v[17];
    r.maxp = v[18];
    out.push_back(r);
  }
  return out;
}

void write_checks_ndjson(const std::filesystem::path& path, const std::vector<CheckResult>& checks) {
  auto out = open_out(path);
  for (const auto& c : checks) out << to_ndjson(c) << '\n';
  finish(out, path);
}

void write_picard_csv(const std::filesystem::path& path, const PicardReport& report) {
  auto out = open_out(path);
  out << "n,alpha,field_diff,d3_diff\n";
  for (std::size_t i = 0; i < report.alpha.size(); ++i) {
    std::string s;
    append(s, static_cast<double>(i + 1));
    append(s, report.alpha[i]);
    append(s, report.field_diff[i]);
    append(s, report.d3_diff[i]);
    out << s << '\n';
  }
  finish(out, path);
}

void write_envelope_csv(const std::filesystem::path& path, const SupportEnvelope& env, double t_end, int samples) {
  auto out = open_out(path);
  std::string head;
  append(head, env.a);
  out << "# a=" << head << "\n";
  out << "t,P,X\n";
  for (int i = 0; i <= samples; ++i) {
    double t = t_end * i / samples;
    std::string s;
    append(s, t);
    append(s, env.P(t));
    append(s, env.X(t));
    out << s << '\n';
  }
  finish(out, path);
}

}  // namespace rvprd

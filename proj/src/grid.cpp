#include "rvprd/grid.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <span>

#include <json.hpp>

#include "rvprd/errors.hpp"
#include "rvprd/parallel.hpp"

namespace rvprd {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!(a == b)) throw GridMismatchError(std::string(what) + ": fields live on different grids");
}

double integrate(const ScalarField& f) {
  return f.grid.cell_volume() * reproducible_sum(f.values.size(), [&](std::size_t i) { return f.values[i]; });
}

Vec3 integrate(const VectorField& f) {
  auto s = reproducible_sums(f.grid.size(), 3, [&](std::size_t i, std::span<double> acc) {
    acc[0] += f.comp[0][i];
    acc[1] += f.comp[1][i];
    acc[2] += f.comp[2][i];
  });
  double dv = f.grid.cell_volume();
  return {dv * s[0], dv * s[1], dv * s[2]};
}

double max_abs(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.values) m = std::fmax(m, std::fabs(v));
  return m;
}

double max_norm(const VectorField& f) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.grid.size(); ++i) m = std::fmax(m, norm(f.at(i)));
  return m;
}

double l2_norm(const ScalarField& f) {
  double s = reproducible_sum(f.values.size(), [&](std::size_t i) { return f.values[i] * f.values[i]; });
  return std::sqrt(f.grid.cell_volume() * s);
}

double l2_norm(const VectorField& f) {
  double s = reproducible_sum(f.grid.size(), [&](std::size_t i) {
    Vec3 v = f.at(i);
    return dot(v, v);
  });
  return std::sqrt(f.grid.cell_volume() * s);
}

ScalarField axpby(double a, const ScalarField& x, double b, const ScalarField& y) {
  require_same_grid(x.grid, y.grid, "axpby");
  ScalarField r(x.grid);
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] = a * x.values[i] + b * y.values[i];
  return r;
}

VectorField axpby(double a, const VectorField& x, double b, const VectorField& y) {
  require_same_grid(x.grid, y.grid, "axpby");
  VectorField r(x.grid);
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < r.grid.size(); ++i) r.comp[c][i] = a * x.comp[c][i] + b * y.comp[c][i];
  return r;
}

namespace {

template <class Pred>
bool all_outside_zero(const GridSpec& g, double limit, Pred nonzero) {
  for (int k = 0; k < g.nodes; ++k)
    for (int j = 0; j < g.nodes; ++j)
      for (int i = 0; i < g.nodes; ++i) {
        bool outside = std::fabs(g.coord(i)) > limit || std::fabs(g.coord(j)) > limit ||
                       std::fabs(g.coord(k)) > limit;
        if (outside && nonzero(g.index(i, j, k))) return false;
      }
  return true;
}

void write_le_doubles(std::ofstream& out, std::span<const double> data) {
  static_assert(sizeof(double) == 8);
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size() * 8));
  } else {
    for (double v : data) {
      auto bits = std::bit_cast<std::uint64_t>(v);
      char bytes[8];
      for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((bits >> (8 * b)) & 0xff);
      out.write(bytes, 8);
    }
  }
}

void write_snapshot_impl(const std::filesystem::path& stem, const GridSpec& g, int components, double time,
                         const std::vector<double>& node_major) {
  auto bin = stem;
  bin += ".bin";
  std::ofstream out(bin, std::ios::binary);
  if (!out) throw Error("cannot open " + bin.string() + " for writing");
  write_le_doubles(out, node_major);
  if (!out) throw Error("write failed: " + bin.string());

  auto side = stem;
  side += ".json";
  std::ofstream js(side);
  if (!js) throw Error("cannot open " + side.string() + " for writing");
  nlohmann::json meta = {{"extent", g.extent}, {"nodes", g.nodes}, {"components", components}, {"time", time}};
  js << meta.dump() << "\n";
}

}  // namespace

bool vanishes_outside(const ScalarField& f, double limit) {
  return all_outside_zero(f.grid, limit, [&](std::size_t i) { return f.values[i] != 0.0; });
}

bool vanishes_outside(const VectorField& f, double limit) {
  return all_outside_zero(f.grid, limit, [&](std::size_t i) {
    return f.comp[0][i] != 0.0 || f.comp[1][i] != 0.0 || f.comp[2][i] != 0.0;
  });
}

void write_snapshot(const std::filesystem::path& stem, const ScalarField& f, double time) {
  write_snapshot_impl(stem, f.grid, 1, time, f.values);
}

void write_snapshot(const std::filesystem::path& stem, const VectorField& f, double time) {
  std::vector<double> flat(3 * f.grid.size());
  for (std::size_t i = 0; i < f.grid.size(); ++i)
    for (int c = 0; c < 3; ++c) flat[3 * i + c] = f.comp[c][i];
  write_snapshot_impl(stem, f.grid, 3, time, flat);
}

Snapshot read_snapshot(const std::filesystem::path& stem) {
  auto side = stem;
  side += ".json";
  std::ifstream js(side);
  if (!js) throw Error("cannot open " + side.string());
  auto meta = nlohmann::json::parse(js);
  Snapshot s;
  s.grid.extent = meta.at("extent").get<double>();
  s.grid.nodes = meta.at("nodes").get<int>();
  s.components = meta.at("components").get<int>();
  s.time = meta.at("time").get<double>();

  auto bin = stem;
  bin += ".bin";
  std::ifstream in(bin, std::ios::binary);
  if (!in) throw Error("cannot open " + bin.string());
  s.data.resize(s.grid.size() * static_cast<std::size_t>(s.components));
  std::vector<unsigned char> raw(s.data.size() * 8);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!in) throw Error("truncated snapshot: " + bin.string());
  for (std::size_t i = 0; i < s.data.size(); ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(raw[8 * i + b]) << (8 * b);
    s.data[i] = std::bit_cast<double>(bits);
  }
  return s;
}

}  // namespace rvprd

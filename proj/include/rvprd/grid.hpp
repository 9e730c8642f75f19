#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <vector>

#include "rvprd/vec3.hpp"

namespace rvprd {

/// Uniform node grid on the cube [-L, L]^3 with n nodes per axis.
struct GridSpec {
  double extent = 1.0;  // L
  int nodes = 64;       // n, a power of two

  double spacing() const { return 2.0 * extent / (nodes - 1); }
  double cell_volume() const { double h = spacing(); return h * h * h; }
  double coord(int i) const { return -extent + i * spacing(); }
  std::size_t size() const { return static_cast<std::size_t>(nodes) * nodes * nodes; }
  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(nodes) * (j + static_cast<std::size_t>(nodes) * k);
  }
  Vec3 position(int i, int j, int k) const { return {coord(i), coord(j), coord(k)}; }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

bool is_power_of_two(int n);

struct ScalarField {
  GridSpec grid;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(const GridSpec& g) : grid(g), values(g.size(), 0.0) {}

  double& at(int i, int j, int k) { return values[grid.index(i, j, k)]; }
  double at(int i, int j, int k) const { return values[grid.index(i, j, k)]; }
};

/// Three components stored as separate arrays (x, y, z).
struct VectorField {
  GridSpec grid;
  std::array<std::vector<double>, 3> comp;

  VectorField() = default;
  explicit VectorField(const GridSpec& g) : grid(g) {
    for (auto& c : comp) c.assign(g.size(), 0.0);
  }

  Vec3 at(std::size_t idx) const { return {comp[0][idx], comp[1][idx], comp[2][idx]}; }
  void set(std::size_t idx, const Vec3& v) { comp[0][idx] = v.x; comp[1][idx] = v.y; comp[2][idx] = v.z; }
};

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what);

/// h^3 * sum over nodes, reproducible.
double integrate(const ScalarField& f);
Vec3 integrate(const VectorField& f);

double max_abs(const ScalarField& f);
/// max over nodes of the Euclidean norm.
double max_norm(const VectorField& f);
/// Discrete L2 norm sqrt(h^3 sum |f|^2).
double l2_norm(const ScalarField& f);
double l2_norm(const VectorField& f);

ScalarField axpby(double a, const ScalarField& x, double b, const ScalarField& y);
VectorField axpby(double a, const VectorField& x, double b, const VectorField& y);

/// True when every node with |coordinate| > limit on some axis holds zero.
bool vanishes_outside(const ScalarField& f, double limit);
bool vanishes_outside(const VectorField& f, double limit);

/// Field snapshot: flat little-endian float64 in node-major order (node index
/// i + n*(j + n*k), components contiguous per node) plus a JSON sidecar
/// {extent, nodes, components, time}. `stem` gets ".bin" and ".json" appended.
void write_snapshot(const std::filesystem::path& stem, const ScalarField& f, double time);
void write_snapshot(const std::filesystem::path& stem, const VectorField& f, double time);

struct Snapshot {
  GridSpec grid;
  int components = 1;
  double time = 0.0;
  std::vector<double> data;  // node-major
};
Snapshot read_snapshot(const std::filesystem::path& stem);

}  // namespace rvprd

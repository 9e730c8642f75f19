#include "rvprd/field_solver.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "rvprd/cic.hpp"
#include "rvprd/parallel.hpp"

namespace rvprd {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTruncationFactor = 2.5;
using cplx = std::complex<double>;
}  // namespace

FreeSpaceSolver::FreeSpaceSolver(const GridSpec& grid)
    : grid_(grid), fft_(grid.nodes), radius_(kTruncationFactor * grid.extent) {
  const int N = fft_.padded();
  const int Nh = fft_.half();
  const double dk = 2.0 * kPi / (N * grid.spacing());
  for (int a = 0; a < 3; ++a) {
    int len = a == 0 ? Nh : N;
    k_[a].resize(len);
    for (int m = 0; m < len; ++m) {
      int s = fft_.signed_index(m);
      k_[a][m] = (2 * std::abs(s) == N) ? 0.0 : dk * s;
    }
  }
  green_.resize(fft_.spectrum_size());
  const double R = radius_;
  parallel_for(static_cast<std::size_t>(N), [&](std::size_t kz) {
    double qz = dk * fft_.signed_index(static_cast<int>(kz));
    for (int ky = 0; ky < N; ++ky) {
      double qy = dk * fft_.signed_index(ky);
      for (int kx = 0; kx < Nh; ++kx) {
        double qx = dk * fft_.signed_index(kx);
        double q2 = qx * qx + qy * qy + qz * qz;
        double g;
        if (q2 == 0.0) {
          g = 2.0 * kPi * R * R;
        } else {
          double s = std::sin(0.5 * std::sqrt(q2) * R);
          g = 8.0 * kPi * s * s / q2;
        }
        green_[kx + static_cast<std::size_t>(Nh) * (ky + static_cast<std::size_t>(N) * kz)] = g;
      }
    }
  });
}

template <class F>
void FreeSpaceSolver::for_each_mode(F&& f) const {
  const int N = fft_.padded();
  const int Nh = fft_.half();
  parallel_for(static_cast<std::size_t>(N), [&](std::size_t kz) {
    for (int ky = 0; ky < N; ++ky) {
      std::size_t base = static_cast<std::size_t>(Nh) * (ky + static_cast<std::size_t>(N) * kz);
      for (int kx = 0; kx < Nh; ++kx) f(base + kx, kx, ky, static_cast<int>(kz));
    }
  });
}

Spectrum FreeSpaceSolver::transform(const ScalarField& f) const {
  require_same_grid(grid_, f.grid, "transform");
  Spectrum out;
  fft_.forward(f.values, out);
  return out;
}

std::array<Spectrum, 3> FreeSpaceSolver::transform(const VectorField& f) const {
  require_same_grid(grid_, f.grid, "transform");
  std::array<Spectrum, 3> out;
  for (int a = 0; a < 3; ++a) fft_.forward(f.comp[a], out[a]);
  return out;
}

ScalarField FreeSpaceSolver::potential(const Spectrum& rho_hat) const {
  const double norm = 1.0 / std::pow(static_cast<double>(fft_.padded()), 3);
  Spectrum s(rho_hat.size());
  for_each_mode([&](std::size_t m, int, int, int) { s[m] = rho_hat[m] * (green_[m] * norm); });
  ScalarField u(grid_);
  fft_.inverse(s, u.values);
  return u;
}

VectorField FreeSpaceSolver::field(const Spectrum& rho_hat) const {
  const double norm = 1.0 / std::pow(static_cast<double>(fft_.padded()), 3);
  VectorField e(grid_);
  Spectrum s(rho_hat.size());
  for (int a = 0; a < 3; ++a) {
    for_each_mode([&](std::size_t m, int kx, int ky, int kz) {
      int idx[3] = {kx, ky, kz};
      // E = -grad u  ->  -i k G rho_hat
      s[m] = rho_hat[m] * cplx(0.0, -k_[a][idx[a]] * green_[m] * norm);
    });
    fft_.inverse(s, e.comp[a]);
  }
  return e;
}

double FreeSpaceSolver::self_energy(const Spectrum& rho_hat) const {
  const int N = fft_.padded();
  const int Nh = fft_.half();
  double sum = reproducible_sum(rho_hat.size(), [&](std::size_t m) {
    return weight(m % Nh) * green_[m] * std::norm(rho_hat[m]);
  });
  return 0.5 * grid_.cell_volume() * sum / std::pow(static_cast<double>(N), 3);
}

double FreeSpaceSolver::spectral_inner(const Spectrum& a_hat, const Spectrum& b_hat) const {
  const int N = fft_.padded();
  const int Nh = fft_.half();
  double sum = reproducible_sum(a_hat.size(), [&](std::size_t m) {
    return weight(m % Nh) * (std::conj(a_hat[m]) * b_hat[m]).real();
  });
  return grid_.cell_volume() * sum / std::pow(static_cast<double>(N), 3);
}

VectorField FreeSpaceSolver::apply_H(const std::array<Spectrum, 3>& j_hat) const {
  const double norm = 1.0 / std::pow(static_cast<double>(fft_.padded()), 3);
  VectorField out(grid_);
  Spectrum s(j_hat[0].size());
  for (int a = 0; a < 3; ++a) {
    for_each_mode([&](std::size_t m, int kx, int ky, int kz) {
      double k[3] = {k_[0][kx], k_[1][ky], k_[2][kz]};
      cplx div = k[0] * j_hat[0][m] + k[1] * j_hat[1][m] + k[2] * j_hat[2][m];
      s[m] = div * (k[a] * green_[m] * norm);
    });
    fft_.inverse(s, out.comp[a]);
  }
  return out;
}

Vec3 FreeSpaceSolver::h_pairing(const Spectrum& a_hat, const std::array<Spectrum, 3>& j_hat) const {
  const int N = fft_.padded();
  const int Nh = fft_.half();
  const std::size_t ky_stride = static_cast<std::size_t>(Nh);
  const std::size_t kz_stride = ky_stride * N;
  auto acc = reproducible_sums(a_hat.size(), 3, [&](std::size_t m, std::span<double> out) {
    std::size_t kx = m % ky_stride, ky = (m / ky_stride) % N, kz = m / kz_stride;
    double k[3] = {k_[0][kx], k_[1][ky], k_[2][kz]};
    cplx div = k[0] * j_hat[0][m] + k[1] * j_hat[1][m] + k[2] * j_hat[2][m];
    double c = (std::conj(a_hat[m]) * div).real() * green_[m] * weight(kx);
    for (int r = 0; r < 3; ++r) out[r] += k[r] * c;
  });
  double scale = grid_.cell_volume() / std::pow(static_cast<double>(N), 3);
  return {acc[0] * scale, acc[1] * scale, acc[2] * scale};
}

Mat3 FreeSpaceSolver::h_pairing_matrix(const Spectrum& a_hat, const Spectrum& b_hat) const {
  const int N = fft_.padded();
  const int Nh = fft_.half();
  const std::size_t ky_stride = static_cast<std::size_t>(Nh);
  const std::size_t kz_stride = ky_stride * N;
  auto acc = reproducible_sums(a_hat.size(), 6, [&](std::size_t m, std::span<double> out) {
    std::size_t kx = m % ky_stride, ky = (m / ky_stride) % N, kz = m / kz_stride;
    double k[3] = {k_[0][kx], k_[1][ky], k_[2][kz]};
    double c = (std::conj(a_hat[m]) * b_hat[m]).real() * green_[m] * weight(kx);
    out[0] += k[0] * k[0] * c;
    out[1] += k[1] * k[1] * c;
    out[2] += k[2] * k[2] * c;
    out[3] += k[0] * k[1] * c;
    out[4] += k[0] * k[2] * c;
    out[5] += k[1] * k[2] * c;
  });
  double s = grid_.cell_volume() / std::pow(static_cast<double>(N), 3);
  Mat3 M{};
  M[0][0] = acc[0] * s;
  M[1][1] = acc[1] * s;
  M[2][2] = acc[2] * s;
  M[0][1] = M[1][0] = acc[3] * s;
  M[0][2] = M[2][0] = acc[4] * s;
  M[1][2] = M[2][1] = acc[5] * s;
  return M;
}

const FreeSpaceSolver& solver_for(const GridSpec& grid) {
  static std::mutex mu;
  static std::map<std::pair<double, int>, std::unique_ptr<FreeSpaceSolver>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(grid.extent, grid.nodes);
  auto it = cache.find(key);
  if (it == cache.end()) {
    if (grid.nodes < 4 || grid.nodes % 2 != 0) throw ResolutionError("grid nodes must be even and >= 4");
    it = cache.emplace(key, std::make_unique<FreeSpaceSolver>(grid)).first;
  }
  return *it->second;
}

void require_half_domain(const ScalarField& rho, const char* what) {
  if (!vanishes_outside(rho, 0.5 * rho.grid.extent))
    throw SupportViolationError(std::string(what) + " is nonzero outside [-L/2, L/2]^3");
}

void require_half_domain(const VectorField& j, const char* what) {
  if (!vanishes_outside(j, 0.5 * j.grid.extent))
    throw SupportViolationError(std::string(what) + " is nonzero outside [-L/2, L/2]^3");
}

VectorField solve_field_spectral(const ScalarField& rho) {
  require_half_domain(rho, "charge density");
  const auto& s = solver_for(rho.grid);
  return s.field(s.transform(rho));
}

ScalarField solve_potential_spectral(const ScalarField& rho) {
  require_half_domain(rho, "charge density");
  const auto& s = solver_for(rho.grid);
  return s.potential(s.transform(rho));
}

std::vector<Vec3> field_direct_oracle(const ScalarField& rho, std::span<const Vec3> queries) {
  const GridSpec& g = rho.grid;
  struct Src { Vec3 y; double q; };
  std::vector<Src> src;
  for (int k = 0; k < g.nodes; ++k)
    for (int j = 0; j < g.nodes; ++j)
      for (int i = 0; i < g.nodes; ++i) {
        double v = rho.at(i, j, k);
        if (v != 0.0) src.push_back({g.position(i, j, k), v * g.cell_volume()});
      }
  const double skip = 1e-3 * g.spacing();
  std::vector<Vec3> out(queries.size());
  parallel_for(queries.size(), [&](std::size_t q) {
    const Vec3 x = queries[q];
    double e[3] = {0, 0, 0};
    for (const auto& s : src) {
      Vec3 d = x - s.y;
      double r = norm(d);
      if (r < skip) continue;
      double c = s.q / (r * r * r);
      e[0] += c * d.x;
      e[1] += c * d.y;
      e[2] += c * d.z;
    }
    out[q] = {e[0], e[1], e[2]};
  });
  return out;
}

Vec3 interpolate_field(const VectorField& field, const Vec3& x) {
  const GridSpec& g = field.grid;
  if (!in_safe_domain(g, x.x, x.y, x.z))
    throw OutOfDomainError("interpolation point outside [-L+2h, L-2h]^3");
  CicStencil s = cic_stencil(g, x.x, x.y, x.z);
  Vec3 r{};
  for (int c = 0; c < 2; ++c)
    for (int b = 0; b < 2; ++b)
      for (int a = 0; a < 2; ++a) {
        double w = s.wx[a] * s.wy[b] * s.wz[c];
        r = r + w * field.at(g.index(s.i + a, s.j + b, s.k + c));
      }
  return r;
}

double field_sup_bound(const ScalarField& rho) {
  double l1 = rho.grid.cell_volume() *
              reproducible_sum(rho.values.size(), [&](std::size_t i) { return std::fabs(rho.values[i]); });
  double sup = max_abs(rho);
  return 3.0 * std::pow(2.0 * kPi, 2.0 / 3.0) * std::cbrt(l1) * std::pow(sup, 2.0 / 3.0);
}

}  // namespace rvprd

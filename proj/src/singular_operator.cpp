#include "rvprd/singular_operator.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <deque>
#include <numbers>
#include <vector>

#include "rvprd/errors.hpp"
#include "rvprd/parallel.hpp"

namespace rvprd {

VectorField apply_H_spectral(const VectorField& j) {
  require_half_domain(j, "current density");
  const auto& s = solver_for(j.grid);
  return s.apply_H(s.transform(j));
}

namespace {

struct FftwBuffer {
  explicit FftwBuffer(std::size_t count) : ptr(fftw_alloc_complex(count)) {
    if (!ptr) throw ResourceError("FFTW allocation failed");
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* ptr;
};

}  // namespace

VectorField apply_H_quadrature(const VectorField& j, double eta) {
  const GridSpec& g = j.grid;
  const double h = g.spacing();
  if (eta < 2.0 * h * (1.0 - 1e-12)) throw ResolutionError("apply_H_quadrature: eta must be at least 2h");
  const int n = g.nodes;
  const int N = 2 * n;
  const std::size_t real_size = static_cast<std::size_t>(N) * N * N;
  const std::size_t spec_size = static_cast<std::size_t>(N) * N * (N / 2 + 1);

  // Offsets within eta/2 are dropped, the band (eta/2, eta] gets weight 4/3:
  // this is (4 H_{eta/2} - H_eta) / 3 folded into one kernel.
  const double h3 = g.cell_volume();
  const int comp_a[6] = {0, 1, 2, 0, 0, 1};
  const int comp_b[6] = {0, 1, 2, 1, 2, 2};
  std::vector<double> real(real_size);
  std::deque<FftwBuffer> kernel;
  std::deque<FftwBuffer> field;

  FftwBuffer acc(spec_size);
  fftw_plan r2c = fftw_plan_dft_r2c_3d(N, N, N, real.data(), acc.ptr, FFTW_ESTIMATE | FFTW_UNALIGNED);
  auto forward = [&](fftw_complex* out) { fftw_execute_dft_r2c(r2c, real.data(), out); };

  for (int c = 0; c < 6; ++c) {
    kernel.emplace_back(spec_size);
    const int a = comp_a[c], b = comp_b[c];
    parallel_for(static_cast<std::size_t>(N), [&](std::size_t kz) {
      int dz = static_cast<int>(kz) < n ? static_cast<int>(kz) : static_cast<int>(kz) - N;
      for (int ky = 0; ky < N; ++ky) {
        int dy = ky < n ? ky : ky - N;
        for (int kx = 0; kx < N; ++kx) {
          int dx = kx < n ? kx : kx - N;
          double v = 0.0;
          double z[3] = {dx * h, dy * h, dz * h};
          double r2 = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
          double r = std::sqrt(r2);
          if (std::abs(dx) < n && std::abs(dy) < n && std::abs(dz) < n && r > 0.5 * eta) {
            double w = r > eta ? 1.0 : 4.0 / 3.0;
            double k = (a == b ? 1.0 : 0.0) - 3.0 * z[a] * z[b] / r2;
            v = w * h3 * k / (r2 * r);
          }
          real[kx + static_cast<std::size_t>(N) * (ky + static_cast<std::size_t>(N) * kz)] = v;
        }
      }
    });
    forward(kernel.back().ptr);
  }

  for (int a = 0; a < 3; ++a) {
    field.emplace_back(spec_size);
    std::fill(real.begin(), real.end(), 0.0);
    for (int k = 0; k < n; ++k)
      for (int jj = 0; jj < n; ++jj)
        for (int i = 0; i < n; ++i)
          real[i + static_cast<std::size_t>(N) * (jj + static_cast<std::size_t>(N) * k)] = j.comp[a][g.index(i, jj, k)];
    forward(field.back().ptr);
  }
  fftw_destroy_plan(r2c);

  fftw_plan c2r = fftw_plan_dft_c2r_3d(N, N, N, acc.ptr, real.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
  auto comp_index = [&](int a, int b) {
    for (int c = 0; c < 6; ++c)
      if ((comp_a[c] == a && comp_b[c] == b) || (comp_a[c] == b && comp_b[c] == a)) return c;
    return -1;
  };

  VectorField out(g);
  const double norm = 1.0 / static_cast<double>(real_size);
  const double self = 4.0 * std::numbers::pi / 3.0;
  for (int a = 0; a < 3; ++a) {
    auto* dst = reinterpret_cast<std::complex<double>*>(acc.ptr);
    const auto* k0 = reinterpret_cast<const std::complex<double>*>(kernel[comp_index(a, 0)].ptr);
    const auto* k1 = reinterpret_cast<const std::complex<double>*>(kernel[comp_index(a, 1)].ptr);
    const auto* k2 = reinterpret_cast<const std::complex<double>*>(kernel[comp_index(a, 2)].ptr);
    const auto* j0 = reinterpret_cast<const std::complex<double>*>(field[0].ptr);
    const auto* j1 = reinterpret_cast<const std::complex<double>*>(field[1].ptr);
    const auto* j2 = reinterpret_cast<const std::complex<double>*>(field[2].ptr);
    for (std::size_t m = 0; m < spec_size; ++m) dst[m] = k0[m] * j0[m] + k1[m] * j1[m] + k2[m] * j2[m];
    fftw_execute_dft_c2r(c2r, acc.ptr, real.data());
    for (int k = 0; k < n; ++k)
      for (int jj = 0; jj < n; ++jj)
        for (int i = 0; i < n; ++i) {
          std::size_t idx = g.index(i, jj, k);
          out.comp[a][idx] =
              real[i + static_cast<std::size_t>(N) * (jj + static_cast<std::size_t>(N) * k)] * norm + self * j.comp[a][idx];
        }
  }
  fftw_destroy_plan(c2r);
  return out;
}

Vec3 d3_from_spectra(const FreeSpaceSolver& solver, const Spectrum& rho_plus, const Spectrum& rho_minus,
                     const std::array<Spectrum, 3>& j_plus, const std::array<Spectrum, 3>& j_minus) {
  Vec3 a = solver.h_pairing(rho_plus, j_minus);
  Vec3 b = solver.h_pairing(rho_minus, j_plus);
  return 2.0 * (a - b);
}

Vec3 d3_total(const ScalarField& rho_plus, const ScalarField& rho_minus,
              const VectorField& j_plus, const VectorField& j_minus) {
  const GridSpec& g = rho_plus.grid;
  require_same_grid(g, rho_minus.grid, "d3_total");
  require_same_grid(g, j_plus.grid, "d3_total");
  require_same_grid(g, j_minus.grid, "d3_total");
  require_half_domain(j_plus, "current density");
  require_half_domain(j_minus, "current density");
  const auto& s = solver_for(g);
  return d3_from_spectra(s, s.transform(rho_plus), s.transform(rho_minus), s.transform(j_plus),
                         s.transform(j_minus));
}

DipoleSet grid_moments(const ScalarField& rho_plus, const ScalarField& rho_minus,
                       const VectorField& j_plus, const VectorField& j_minus, const VectorField& E) {
  const GridSpec& g = rho_plus.grid;
  require_same_grid(g, rho_minus.grid, "low_moments");
  require_same_grid(g, j_plus.grid, "low_moments");
  require_same_grid(g, j_minus.grid, "low_moments");
  require_same_grid(g, E.grid, "low_moments");
  const int n = g.nodes;
  auto acc = reproducible_sums(g.size(), 9, [&](std::size_t idx, std::span<double> s) {
    int i = static_cast<int>(idx % n), jj = static_cast<int>((idx / n) % n), k = static_cast<int>(idx / (static_cast<std::size_t>(n) * n));
    double q = rho_plus.values[idx] - rho_minus.values[idx];
    double m = rho_plus.values[idx] + rho_minus.values[idx];
    s[0] += g.coord(i) * q;
    s[1] += g.coord(jj) * q;
    s[2] += g.coord(k) * q;
    for (int a = 0; a < 3; ++a) {
      s[3 + a] += j_plus.comp[a][idx] - j_minus.comp[a][idx];
      s[6 + a] += E.comp[a][idx] * m;
    }
  });
  const double h3 = g.cell_volume();
  DipoleSet d;
  d.D = {h3 * acc[0], h3 * acc[1], h3 * acc[2]};
  d.D1 = {h3 * acc[3], h3 * acc[4], h3 * acc[5]};
  d.D2 = {h3 * acc[6], h3 * acc[7], h3 * acc[8]};
  return d;
}

DipoleSet low_moments(const ScalarField& rho_plus, const ScalarField& rho_minus,
                      const VectorField& j_plus, const VectorField& j_minus, const VectorField& E) {
  DipoleSet d = grid_moments(rho_plus, rho_minus, j_plus, j_minus, E);
  d.D3 = d3_total(rho_plus, rho_minus, j_plus, j_minus);
  return d;
}

}  // namespace rvprd

#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "rvprd/errors.hpp"
#include "rvprd/fft.hpp"
#include "rvprd/grid.hpp"
#include "rvprd/vec3.hpp"

namespace rvprd {

using Mat3 = std::array<std::array<double, 3>, 3>;

/// Free-space Newtonian convolution on a node grid by zero-padded FFT.
///
/// The padded cube has N = 2n nodes per axis and period P = N h. The Green's
/// function 1/|x| is truncated at radius R = 2.5 L, whose transform
///   G(k) = 8 pi sin^2(|k| R / 2) / |k|^2,   G(0) = 2 pi R^2
/// is known in closed form. For sources inside [-L/2, L/2]^3 every target node
/// within distance 2.5 L - sqrt(3) L / 2 of the origin (all nodes except the
/// extreme corners of the cube) sees the exact free-space kernel and no
/// periodic image, so the result converges spectrally in the source
/// resolution. First-derivative factors vanish at the Nyquist index.
class FreeSpaceSolver {
 public:
  explicit FreeSpaceSolver(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  double truncation_radius() const { return radius_; }
  const PaddedFft& fft() const { return fft_; }

  Spectrum transform(const ScalarField& f) const;
  std::array<Spectrum, 3> transform(const VectorField& f) const;

  /// Potential u = int rho(y)/|x-y| dy.
  ScalarField potential(const Spectrum& rho_hat) const;
  /// E = -grad u.
  VectorField field(const Spectrum& rho_hat) const;
  /// 1/2 h^3 sum rho u, evaluated in Fourier space.
  double self_energy(const Spectrum& rho_hat) const;

  /// H(j) = -grad div (G * j), multiplier k k^T G(k).
  VectorField apply_H(const std::array<Spectrum, 3>& j_hat) const;
  /// h^3 sum_x a(x) H(j)(x), evaluated in Fourier space.
  Vec3 h_pairing(const Spectrum& a_hat, const std::array<Spectrum, 3>& j_hat) const;
  /// M[r][c] = h^3 sum_x a(x) H(b e_c)_r(x). Symmetric in (a, b) and in (r, c).
  Mat3 h_pairing_matrix(const Spectrum& a_hat, const Spectrum& b_hat) const;

  /// Real pairing h^3 sum_x a(x) b(x) computed from both spectra.
  double spectral_inner(const Spectrum& a_hat, const Spectrum& b_hat) const;

 private:
  GridSpec grid_;
  PaddedFft fft_;
  double radius_;
  std::vector<double> green_;           // G(k) on the half spectrum
  std::array<std::vector<double>, 3> k_;  // per-axis derivative wavenumbers (Nyquist -> 0)

  double weight(std::size_t kx) const { return (kx == 0 || kx == static_cast<std::size_t>(fft_.half() - 1)) ? 1.0 : 2.0; }
  template <class F>
  void for_each_mode(F&& f) const;
};

/// Shared solver instance for a grid (built on first use).
const FreeSpaceSolver& solver_for(const GridSpec& grid);

/// Throws SupportViolationError unless rho vanishes outside [-L/2, L/2]^3.
void require_half_domain(const ScalarField& rho, const char* what);
void require_half_domain(const VectorField& j, const char* what);

/// Electric field of a gridded charge density on free space.
VectorField solve_field_spectral(const ScalarField& rho);

/// Newtonian potential of a gridded density.
ScalarField solve_potential_spectral(const ScalarField& rho);

/// Reference O(N Q) direct sum  sum_y h^3 rho(y) (x - y) / |x - y|^3  over
/// nodes y, skipping any node within h/1000 of the query point.
std::vector<Vec3> field_direct_oracle(const ScalarField& rho, std::span<const Vec3> queries);

class OutOfDomainError : public Error {
 public:
  using Error::Error;
};

/// CIC interpolation (same weights as deposition). Requires x in [-L+2h, L-2h]^3.
Vec3 interpolate_field(const VectorField& field, const Vec3& x);

/// 3 (2 pi)^{2/3} ||rho||_1^{1/3} ||rho||_inf^{2/3} with discrete norms.
double field_sup_bound(const ScalarField& rho);

}  // namespace rvprd

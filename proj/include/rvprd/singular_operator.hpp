#pragma once

#include <array>

#include "rvprd/field_solver.hpp"
#include "rvprd/grid.hpp"
#include "rvprd/vec3.hpp"

namespace rvprd {

/// c_CZ: the L2 operator norm of H (4 pi times an orthogonal projection).
inline constexpr double kCalderonZygmund = 12.566370614359172;

/// D, D^[1], D^[2], D^[3] at one time slice.
struct DipoleSet {
  double t = 0.0;
  Vec3 D{};
  Vec3 D1{};
  Vec3 D2{};
  Vec3 D3{};

  friend bool operator==(const DipoleSet&, const DipoleSet&) = default;
};

/// H(j) with multiplier k k^T G(k) on the padded grid, i.e. -grad div of the
/// Newtonian potential of j. Requires j to vanish outside [-L/2, L/2]^3.
VectorField apply_H_spectral(const VectorField& j);

/// Real-space principal-value form:
///   sum_{|z| > eta} h^3 |z|^-3 (id - 3 z z^T / |z|^2) j(y + z) + (4 pi / 3) j(y)
/// over lattice offsets z, evaluated at eta and eta/2 and Richardson-extrapolated
/// (the truncation error is even in eta). The lattice sum is a discrete
/// convolution and is carried out with a full-size FFT. Requires eta >= 2h.
VectorField apply_H_quadrature(const VectorField& j, double eta);

/// 2 h^3 sum [rho+ H(j-) - rho- H(j+)], evaluated in Fourier space.
Vec3 d3_total(const ScalarField& rho_plus, const ScalarField& rho_minus,
              const VectorField& j_plus, const VectorField& j_minus);

/// Same from precomputed spectra.
Vec3 d3_from_spectra(const FreeSpaceSolver& solver, const Spectrum& rho_plus, const Spectrum& rho_minus,
                     const std::array<Spectrum, 3>& j_plus, const std::array<Spectrum, 3>& j_minus);

/// D = h^3 sum x (rho+ - rho-), D1 = h^3 sum (j+ - j-), D2 = h^3 sum E (rho+ + rho-), D3 via d3_total.
DipoleSet low_moments(const ScalarField& rho_plus, const ScalarField& rho_minus,
                      const VectorField& j_plus, const VectorField& j_minus, const VectorField& E);

/// D, D1, D2 only (D3 left zero).
DipoleSet grid_moments(const ScalarField& rho_plus, const ScalarField& rho_minus,
                       const VectorField& j_plus, const VectorField& j_minus, const VectorField& E);

}  // namespace rvprd

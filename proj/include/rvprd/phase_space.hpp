#pragma once

#include <cstddef>
#include <vector>

#include "rvprd/cic.hpp"
#include "rvprd/grid.hpp"
#include "rvprd/vec3.hpp"

namespace rvprd {

/// Smooth compactly supported profile exp(1 - 1/(1 - s^2)) on s < 1, zero elsewhere.
double bump(double s);

/// 4*pi * int_0^1 s^2 bump(s) ds: the integral of bump(|y|) over the unit ball.
double bump_ball_integral();

enum class Species { plus, minus };

constexpr int charge_sign(Species s) { return s == Species::plus ? 1 : -1; }
constexpr int species_index(Species s) { return s == Species::plus ? 0 : 1; }

struct SpeciesProfile {
  double amplitude = 0.0;
  Vec3 center_x{};
  Vec3 center_p{};

  friend bool operator==(const SpeciesProfile&, const SpeciesProfile&) = default;
};

/// Norms of one species' initial density, computed by quadrature when the datum is built.
struct DatumNorms {
  double sup = 0.0;
  double l1 = 0.0;
  double sobolev = 0.0;  // W^{inf,1} bound; recorded, not used by any estimate
};

/// Two-species initial phase-space density
///   f(x, p) = A * bump(|x - cx| / rx) * bump(|p - cp| / rp)
/// with per-species amplitude and centers and shared radii.
class InitialDatum {
 public:
  InitialDatum(double spatial_radius, double momentum_radius, SpeciesProfile plus, SpeciesProfile minus);

  /// Single-center layout: both species share amplitude and centers.
  static InitialDatum symmetric(double amplitude, double radius);

  double evaluate(Species s, const Vec3& x, const Vec3& p) const;

  double spatial_radius() const { return rx_; }
  double momentum_radius() const { return rp_; }
  const SpeciesProfile& profile(Species s) const { return s == Species::plus ? plus_ : minus_; }
  const DatumNorms& norms(Species s) const { return norms_[species_index(s)]; }

  /// Radius R0 about the origin containing the support in both x and p.
  double support_radius() const;

  /// Pair norms ||f+||_q + ||f-||_q as used by the envelope constants.
  double pair_sup() const { return norms_[0].sup + norms_[1].sup; }
  double pair_l1() const { return norms_[0].l1 + norms_[1].l1; }

  InitialDatum scaled(double factor) const;
  InitialDatum translated(const Vec3& shift) const;

 private:
  double rx_, rp_;
  SpeciesProfile plus_, minus_;
  DatumNorms norms_[2];
};

/// Deterministic quadrature particles of one species.
struct ParticleEnsemble {
  int sign = 1;
  std::vector<Vec3> x;
  std::vector<Vec3> p;
  std::vector<double> w;
  double cell_volume = 0.0;

  std::size_t size() const { return w.size(); }
};

inline constexpr double kInclusionThreshold = 1e-14;
inline constexpr double kDefaultParticleBudget = 4.0e7;

/// Midpoint tensor lattice with m nodes per phase-space axis over the species'
/// support box, ordered lexicographically (x index outermost, pz innermost).
/// Nodes with f < 1e-14 * A are skipped. Throws ResourceError when m^6 exceeds `budget`.
ParticleEnsemble sample_particles(const InitialDatum& datum, Species s, int m,
                                  double budget = kDefaultParticleBudget);

struct Moments {
  ScalarField rho;
  VectorField j;
};

/// CIC stencils of an ensemble plus a z-layer ordering used for reproducible
/// deposition. Throws DomainOverflowError if a particle is outside [-L+2h, L-2h]^3.
struct DepositPlan {
  GridSpec grid;
  std::vector<CicStencil> stencil;
  std::vector<std::size_t> start;  // per z layer offsets into order
  std::vector<std::size_t> order;
};
DepositPlan make_deposit_plan(const ParticleEnsemble& e, const GridSpec& grid, double time = 0.0);

ScalarField deposit_density(const DepositPlan& plan, const ParticleEnsemble& e);
VectorField deposit_current(const DepositPlan& plan, const ParticleEnsemble& e);
/// CIC interpolation of a field at every particle of the plan.
void gather(const DepositPlan& plan, const VectorField& field, std::vector<Vec3>& out);

/// CIC deposition of w_i (density) and w_i p_i (current). Reproducible for any
/// worker count. Throws DomainOverflowError if a particle is outside [-L+2h, L-2h]^3.
Moments deposit_moments(const ParticleEnsemble& e, const GridSpec& grid, double time = 0.0);

/// Sum of all weights of both species.
double bare_mass(const ParticleEnsemble& plus, const ParticleEnsemble& minus);

}  // namespace rvprd

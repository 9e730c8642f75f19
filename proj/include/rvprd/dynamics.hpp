#pragma once

#include <array>
#include <functional>
#include <vector>

#include "rvprd/config.hpp"
#include "rvprd/diagnostics.hpp"
#include "rvprd/fft.hpp"
#include "rvprd/phase_space.hpp"
#include "rvprd/singular_operator.hpp"

namespace rvprd {

/// Particles plus the fields they induce. All cached quantities describe the
/// current positions and momenta.
struct SimState {
  double t = 0.0;
  Mode mode = Mode::rvprd;
  double epsilon = 0.0;
  GridSpec grid;
  ParticleEnsemble plus, minus;
  double mass = 0.0;

  DepositPlan plan_plus, plan_minus;
  ScalarField rho_plus, rho_minus;
  VectorField j_plus, j_minus, E;
  Spectrum rho_plus_hat, rho_minus_hat, rho_hat;
  std::array<Spectrum, 3> j_plus_hat, j_minus_hat;
  DipoleSet dipoles;
  double field_ratio = 0.0;  // max|E| / field_sup_bound(rho) for the current fields
};

/// Builds the cached fields for given ensembles (validates the half-domain rule).
SimState make_state(ParticleEnsemble plus, ParticleEnsemble minus, const GridSpec& grid, Mode mode, double eps,
                    double t = 0.0);

/// Samples the configured datum at the setup's grid.
SimState initial_state(const RunConfig& config, const RunSetup& setup);

/// One kick-drift-kick step of size dt (dt may be negative for reversal tests).
///
/// rvprd: p += dt/2 s (E + eps D3); x += dt p; p += dt/2 s (E + eps D3), where
/// the closing D3 is taken at the new momenta. D3 is linear in the momenta,
/// so that implicit half-kick reduces to a 3x3 solve.
/// reduction21: p += dt/2 s E; x += dt (p + s eps D2) with D2 averaged over a
/// Heun predictor; p += dt/2 s E.
/// vlasov_poisson: rvprd with eps = 0.
void step(SimState& s, double dt);

MomentRecord make_record(const SimState& s);

struct RunResult {
  RunSetup setup;
  std::vector<MomentRecord> records;
  double max_field_ratio = 0.0;  // over every step, including t = 0
  long steps = 0;
};

using RecordObserver = std::function<void(const MomentRecord&, const SimState&)>;

/// Steps from 0 to T emitting a record every `cadence` steps and at T.
RunResult run(const RunConfig& config, const RecordObserver& observer = {});
RunResult run(const RunConfig& config, const RunSetup& setup, const RecordObserver& observer = {});

}  // namespace rvprd

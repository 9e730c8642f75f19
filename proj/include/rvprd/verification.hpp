#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rvprd/dynamics.hpp"
#include "rvprd/field_solver.hpp"

namespace rvprd::verify {

// ---- analytic test fields -------------------------------------------------

/// d/ds bump(s).
double bump_derivative(double s);

/// bump(|x| / R) at every node.
ScalarField radial_bump(const GridSpec& g, double R);

/// Exact gradient of bump(|x| / R).
VectorField radial_bump_gradient(const GridSpec& g, double R);

/// curl (0, 0, bump(|x|/R)) = (d_y psi, -d_x psi, 0): divergence free, compact.
VectorField radial_bump_curl(const GridSpec& g, double R);

/// Sum of a few bump-weighted random polynomial vector fields supported in
/// [-L/2, L/2]^3, reproducible from the seed.
VectorField random_smooth_current(const GridSpec& g, std::uint64_t seed);

/// 4 pi int_0^r s^2 profile(s) ds by composite Gauss-Legendre.
double enclosed_charge(const std::function<double(double)>& profile, double r, double support);

/// Coulomb field of a radial density via its enclosed charge, at every node
/// (zero at the origin). Enclosed charges are accumulated over sorted radii.
VectorField shell_theorem_field(const GridSpec& g, const std::function<double(double)>& profile, double support);

// ---- comparison helpers ----------------------------------------------------

/// ||a - b||_2 / ||b||_2 over all nodes.
double relative_l2(const VectorField& a, const VectorField& b);

/// max over nodes with |x| >= r_min of |a - b|_inf, divided by max |b|_inf over the same nodes.
double relative_linf(const VectorField& a, const VectorField& b, double r_min);

/// Smallest improvement factor along a ladder: min_i r_i / r_{i+1}.
double min_ratio(const std::vector<double>& residuals);

// ---- acceptance criteria ---------------------------------------------------

struct CriterionResult {
  int id = 0;
  std::string key;    // check name in checks.ndjson
  std::string title;
  bool pass = false;
  double max_residual = 0.0;
  std::optional<double> order_estimate;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  int nodes = 64;           // n for the dynamics criteria
  int sampling = 12;        // m for the dynamics criteria
  int ladder_steps = 8;     // steps of the coarsest run in each dt ladder
  int ladder_levels = 3;    // dt0, dt0/2, dt0/4
  std::function<void(const CriterionResult&)> on_result;
};

/// Runs criteria 1 through 11 in order.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

}  // namespace rvprd::verify

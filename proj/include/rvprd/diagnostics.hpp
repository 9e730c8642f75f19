#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rvprd/config.hpp"
#include "rvprd/envelope.hpp"
#include "rvprd/singular_operator.hpp"

namespace rvprd {

struct MomentRecord {
  double t = 0.0;
  double M = 0.0;
  DipoleSet dip;
  double ekin = 0.0;
  double efield = 0.0;
  double eschott = 0.0;  // mode energy: E_S-tilde for rvprd, E_kin + E_field otherwise
  double maxx = 0.0;
  double maxp = 0.0;

  friend bool operator==(const MomentRecord&, const MomentRecord&) = default;
};

/// E_kin + E_field - eps D1.D2 + (eps^2 M / 2) |D2|^2.
double schott_energy(double ekin, double efield, const Vec3& D1, const Vec3& D2, double eps, double M);

/// Energy column for a mode: E_S-tilde for rvprd, plain E_kin + E_field otherwise.
double mode_energy(Mode mode, double ekin, double efield, const Vec3& D1, const Vec3& D2, double eps, double M);

/// Throws CadenceError unless the series has >= 3 records at uniform spacing
/// (relative tolerance 1e-9). Returns the spacing.
double uniform_spacing(const std::vector<MomentRecord>& series);

/// r_k = [E(t_{k+1}) - E(t_k)] / dt + eps |(D2(t_k) + D2(t_{k+1})) / 2|^2 on the energy column.
std::vector<double> dissipation_residual(const std::vector<MomentRecord>& series, double eps);

/// Indices k where E(t_{k+1}) > E(t_k) + |r_k| dt (the monotonicity check).
std::vector<std::size_t> monotonicity_violations(const std::vector<MomentRecord>& series, double eps);

/// Centered-difference residuals at interior records k = 1 .. K-2 (max norm):
///   |(D_{k+1} - D_{k-1}) / 2dt - D1_k|
///   |(D1_{k+1} - D1_{k-1}) / 2dt - (D2_k + eps M D3_k)|
///   |(D2_{k+1} - D2_{k-1}) / 2dt - D3_k|
struct ChainResiduals {
  std::vector<double> dipole;
  std::vector<double> current;
  std::vector<double> field;
};
ChainResiduals chain_residuals(const std::vector<MomentRecord>& series, double eps, double M);

struct EnvelopeCheck {
  bool pass = true;
  std::optional<std::size_t> first_failure;
  double min_margin_p = std::numeric_limits<double>::infinity();  // min over records of P(t) - maxp
  double min_margin_x = std::numeric_limits<double>::infinity();  // min over records of X(t) - maxx
};
EnvelopeCheck envelope_check(const std::vector<MomentRecord>& series, const SupportEnvelope& env);

struct PicardReport;

/// Fit of log alpha_n + log (n-1)! = c0 + (n-1) log(C3 T) over iterations with
/// alpha_n above the rounding floor, with c0 raised so the fit dominates all
/// fitted points.
struct ConvergenceSummary {
  bool exact = false;            // alpha_n = 0 for every n >= 2
  bool super_envelope = false;   // some ratio alpha_{n+1}/alpha_n exceeded 1.5 C/n for n >= 3
  double fitted_c3t = 0.0;       // exp(slope)
  double log_constant = 0.0;     // c0 after the upward shift
  double ratio_constant = 0.0;   // C-hat = max_{n=1,2} n alpha_{n+1}/alpha_n
  std::size_t last_resolved = 0; // largest n with alpha_n above the floor
  std::vector<double> residuals; // fit minus data (>= 0) per fitted n
};
ConvergenceSummary convergence_report(const PicardReport& report);

/// Rounding floor for alpha_n: 1e-13 (1 + L).
double alpha_floor(const PicardReport& report);

/// One NDJSON line.
struct CheckResult {
  std::string check;
  bool pass = false;
  double max_residual = 0.0;
  std::optional<double> order_estimate;
  std::string detail;
};
std::string to_ndjson(const CheckResult& c);

/// log2 of successive ratios of max residuals at dt, dt/2, dt/4 ... (smallest improvement).
double order_estimate(const std::vector<double>& max_residuals);

}  // namespace rvprd

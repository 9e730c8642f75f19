#pragma once

#include <limits>

namespace rvprd {

class InitialDatum;

/// Maximal solution of P' = C3 (P^2 + P^4), P(0) = R0, and X(t) = R0 + int_0^t P.
///
/// Separating variables gives
///   1/R0 - 1/P - arctan P + arctan R0 = C3 t,
/// so the blow-up time is a = (1/R0 - arctan(1/R0)) / C3. P(t) is found by
/// bisection on s = 1/P, X(t) in closed form.
struct SupportEnvelope {
  double R0 = 1.0;
  double C1 = 0.0;
  double C2 = 0.0;
  double C3 = 0.0;
  double a = std::numeric_limits<double>::infinity();

  /// +inf for t >= a.
  double P(double t) const;
  double X(double t) const;
};

/// Build from pair norms (sums over species): sup = ||f+||inf + ||f-||inf, l1 likewise.
///   C1 = 3 (2 pi)^{3/2} sup^{2/3} l1^{1/3},  C2 = 8 pi sup l1,  C3 = max(C1, C2).
SupportEnvelope support_envelope(double pair_sup, double pair_l1, double R0);
SupportEnvelope support_envelope(const InitialDatum& datum);

/// Adaptive Dormand-Prince integration of the envelope ODE, independent of the closed form.
struct EnvelopeOdeResult {
  double P = 0.0;       // at t_end (or where the integration stopped)
  double X = 0.0;
  double t = 0.0;       // time reached
  double blowup = std::numeric_limits<double>::infinity();  // estimated when P passes p_stop
  long steps = 0;
};
EnvelopeOdeResult integrate_envelope_ode(const SupportEnvelope& env, double t_end, double rtol = 1e-12,
                                         double p_stop = 1e6);

}  // namespace rvprd

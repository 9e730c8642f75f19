#include "rvprd/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rvprd/phase_space.hpp"

namespace rvprd {

namespace {

constexpr double kPi = std::numbers::pi;

// y - atan(y), accurate for small y
double y_minus_atan(double y) {
  if (std::fabs(y) < 1e-2) {
    double y2 = y * y;
    return y * y2 * (1.0 / 3.0 - y2 * (1.0 / 5.0 - y2 * (1.0 / 7.0 - y2 / 9.0)));
  }
  return y - std::atan(y);
}

// C3 t as a function of s = 1/P in (0, 1/R0]; decreasing in s.
double elapsed(double s, double R0) {
  double delta = 1.0 / R0 - s;
  double y = delta * R0 / (R0 + s);
  return delta * s / (R0 + s) + y_minus_atan(y);
}

}  // namespace

double SupportEnvelope::P(double t) const {
  if (t <= 0.0) return R0;
  if (C3 == 0.0) return R0;
  if (t >= a) return std::numeric_limits<double>::infinity();
  const double target = C3 * t;
  double lo = 0.0, hi = 1.0 / R0;  // elapsed(lo) = C3 a > target >= elapsed(hi) = 0
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (elapsed(mid, R0) > target) lo = mid; else hi = mid;
  }
  return 1.0 / (0.5 * (lo + hi));
}

double SupportEnvelope::X(double t) const {
  if (t <= 0.0) return R0;
  if (C3 == 0.0) return R0 * (1.0 + t);
  if (t >= a) {
    return R0 + (-std::log(R0) + 0.5 * std::log1p(R0 * R0)) / C3;
  }
  double p = P(t);
  double u = p / R0 - 1.0;
  if (u < 1e-3) {
    // P - R0 is swamped by rounding here; integrate P directly instead
    static constexpr double xs[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                     0.9061798459386640};
    static constexpr double ws[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                     0.4786286704993665, 0.2369268850561891};
    const int panels = 4;
    double h = t / panels, sum = 0.0;
    for (int k = 0; k < panels; ++k)
      for (int q = 0; q < 5; ++q) sum += ws[q] * P((k + 0.5) * h + 0.5 * h * xs[q]);
    return R0 + 0.5 * h * sum;
  }
  double v = (p - R0) * (p + R0) / (1.0 + R0 * R0);
  return R0 + (std::log1p(u) - 0.5 * std::log1p(v)) / C3;
}

SupportEnvelope support_envelope(double pair_sup, double pair_l1, double R0) {
  SupportEnvelope env;
  env.R0 = R0;
  env.C1 = 3.0 * std::pow(2.0 * kPi, 1.5) * std::pow(pair_sup, 2.0 / 3.0) * std::cbrt(pair_l1);
  env.C2 = 8.0 * kPi * pair_sup * pair_l1;
  env.C3 = std::max(env.C1, env.C2);
  env.a = env.C3 > 0.0 ? (1.0 / R0 - std::atan(1.0 / R0)) / env.C3 : std::numeric_limits<double>::infinity();
  return env;
}

SupportEnvelope support_envelope(const InitialDatum& datum) {
  return support_envelope(datum.pair_sup(), datum.pair_l1(), datum.support_radius());
}

EnvelopeOdeResult integrate_envelope_ode(const SupportEnvelope& env, double t_end, double rtol, double p_stop) {
  // Dormand-Prince 5(4) on y = (P, X).
  // Autonomous system, so the node fractions c_i are not needed.
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  const double C3 = env.C3;
  auto f = [C3](double p) { return C3 * (p * p + p * p * p * p); };

  EnvelopeOdeResult r;
  double t = 0.0, P = env.R0, X = env.R0;
  double dt = std::min(1e-3 * std::max(t_end, 1e-12), 1e-3 / std::max(f(P), 1e-300));
  if (!std::isfinite(t_end)) dt = 1e-3 / std::max(f(P), 1e-300);
  double k1p = f(P), k1x = P;
  while (t < t_end) {
    if (P >= p_stop) {
      // remaining time to blow-up: int_P^inf dq / (C3 q^2 (1 + q^2)) = (1/P - atan(1/P)) / C3
      double w = 1.0 / P;
      r.blowup = t + y_minus_atan(w) / C3;
      break;
    }
    if (t + dt > t_end) dt = t_end - t;
    double p2 = P + dt * a21 * k1p;
    double k2p = f(p2);
    double p3 = P + dt * (a31 * k1p + a32 * k2p);
    double k3p = f(p3), k3x = p3;
    double p4 = P + dt * (a41 * k1p + a42 * k2p + a43 * k3p);
    double k4p = f(p4), k4x = p4;
    double p5 = P + dt * (a51 * k1p + a52 * k2p + a53 * k3p + a54 * k4p);
    double k5p = f(p5), k5x = p5;
    double p6 = P + dt * (a61 * k1p + a62 * k2p + a63 * k3p + a64 * k4p + a65 * k5p);
    double k6p = f(p6), k6x = p6;
    double pn = P + dt * (b1 * k1p + b3 * k3p + b4 * k4p + b5 * k5p + b6 * k6p);
    double xn = X + dt * (b1 * k1x + b3 * k3x + b4 * k4x + b5 * k5x + b6 * k6x);
    double k7p = f(pn), k7x = pn;
    double errp = dt * (e1 * k1p + e3 * k3p + e4 * k4p + e5 * k5p + e6 * k6p + e7 * k7p);
    double errx = dt * (e1 * k1x + e3 * k3x + e4 * k4x + e5 * k5x + e6 * k6x + e7 * k7x);
    double sp = rtol * std::max(std::fabs(P), std::fabs(pn));
    double sx = rtol * std::max(std::fabs(X), std::fabs(xn));
    double err = std::max(std::fabs(errp) / sp, std::fabs(errx) / sx);
    if (!std::isfinite(err)) {
      dt *= 0.1;
      continue;
    }
    if (err <= 1.0) {
      t += dt;
      P = pn;
      X = xn;
      k1p = k7p;
      k1x = k7x;
      ++r.steps;
    }
    double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    dt *= fac;
  }
  r.t = t;
  r.P = P;
  r.X = X;
  return r;
}

}  // namespace rvprd

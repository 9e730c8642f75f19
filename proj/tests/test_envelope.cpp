#include "test_main.hpp"

#include <cmath>

#include "rvprd/config.hpp"
#include "rvprd/envelope.hpp"

using namespace rvprd;

namespace {

SupportEnvelope default_envelope() { return support_envelope(make_datum(DatumConfig{})); }

}  // namespace

TEST_CASE("default datum constants") {
  SupportEnvelope env = default_envelope();
  CHECK(env.R0 == doctest::Approx(1.0));
  CHECK(env.C1 == doctest::Approx(0.170643).epsilon(1e-5));
  CHECK(env.C2 == doctest::Approx(2.96e-4).epsilon(1e-2));
  CHECK(env.C3 == env.C1);
  CHECK(env.a == doctest::Approx(1.25761).epsilon(1e-5));
}

TEST_CASE("P and X start at R0 and blow up at a") {
  SupportEnvelope env = default_envelope();
  CHECK(env.P(0.0) == doctest::Approx(env.R0).epsilon(1e-14));
  CHECK(env.X(0.0) == doctest::Approx(env.R0).epsilon(1e-14));
  CHECK(std::isinf(env.P(env.a)));
  CHECK(env.P(0.999 * env.a) > 10.0);
}

TEST_CASE("P is increasing and convex") {
  SupportEnvelope env = default_envelope();
  const int K = 200;
  const double dt = 0.99 * env.a / K;
  double prev = env.P(0.0), prev_slope = 0.0;
  for (int k = 1; k <= K; ++k) {
    double p = env.P(k * dt);
    double slope = (p - prev) / dt;
    CHECK(p > prev);
    CHECK(slope >= prev_slope);
    prev = p;
    prev_slope = slope;
  }
}

TEST_CASE("closed form solves the envelope ODE") {
  SupportEnvelope env = default_envelope();
  for (double t : {0.1, 0.5, 1.0, 1.2}) {
    const double d = 1e-5;
    double P = env.P(t);
    double dP = (env.P(t + d) - env.P(t - d)) / (2 * d);
    double dX = (env.X(t + d) - env.X(t - d)) / (2 * d);
    CHECK(dP == doctest::Approx(env.C3 * (P * P + P * P * P * P)).epsilon(1e-6));
    CHECK(dX == doctest::Approx(P).epsilon(1e-6));
  }
}

TEST_CASE("independent ODE integration agrees with the closed form") {
  SupportEnvelope env = default_envelope();
  EnvelopeOdeResult mid = integrate_envelope_ode(env, 0.5 * env.a);
  CHECK(mid.P == doctest::Approx(env.P(0.5 * env.a)).epsilon(1e-9));
  CHECK(mid.X == doctest::Approx(env.X(0.5 * env.a)).epsilon(1e-9));
  EnvelopeOdeResult full = integrate_envelope_ode(env, 2.0 * env.a);
  CHECK(std::fabs(full.blowup - env.a) <= 1e-6 * env.a);
}

TEST_CASE("vanishing constants freeze the envelope") {
  SupportEnvelope env = support_envelope(1e-40, 1e-40, 0.7);
  CHECK(env.a > 1e20);
  CHECK(env.P(3.0) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(env.X(3.0) == doctest::Approx(0.7 * 4.0).epsilon(1e-12));
}

#include "test_main.hpp"

#include <cmath>
#include <json.hpp>

#include "rvprd/diagnostics.hpp"
#include "rvprd/errors.hpp"
#include "rvprd/picard.hpp"

using namespace rvprd;

namespace {

// Energy exp(-t) dissipated at rate |D2|^2 = exp(-t) (eps = 1).
std::vector<MomentRecord> damped_series(int K, double T) {
  std::vector<MomentRecord> s(K + 1);
  for (int k = 0; k <= K; ++k) {
    double t = T * k / K;
    s[k].t = t;
    s[k].eschott = std::exp(-t);
    s[k].dip.D2 = {std::exp(-0.5 * t), 0.0, 0.0};
  }
  return s;
}

// D = sin t, D1 = cos t, D2 = -sin t, D3 = -cos t.
std::vector<MomentRecord> oscillator(int K, double T) {
  std::vector<MomentRecord> s(K + 1);
  for (int k = 0; k <= K; ++k) {
    double t = T * k / K;
    s[k].t = t;
    s[k].dip.D = {std::sin(t), 0.0, 0.0};
    s[k].dip.D1 = {std::cos(t), 0.0, 0.0};
    s[k].dip.D2 = {-std::sin(t), 0.0, 0.0};
    s[k].dip.D3 = {-std::cos(t), 0.0, 0.0};
  }
  return s;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

PicardReport report_with(std::vector<double> alpha) {
  PicardReport r;
  r.grid = GridSpec{1.0, 16};
  r.horizon = 0.3;
  r.alpha = std::move(alpha);
  return r;
}

}  // namespace

TEST_CASE("Schott energy and mode energy") {
  Vec3 D1{1.0, 2.0, 0.0}, D2{0.5, -1.0, 2.0};
  CHECK(schott_energy(1.0, 0.5, D1, D2, 0.5, 2.0) == doctest::Approx(1.5 - 0.5 * (-1.5) + 0.25 * 5.25));
  CHECK(mode_energy(Mode::rvprd, 1.0, 0.5, D1, D2, 0.5, 2.0) == schott_energy(1.0, 0.5, D1, D2, 0.5, 2.0));
  CHECK(mode_energy(Mode::reduction21, 1.0, 0.5, D1, D2, 0.5, 2.0) == 1.5);
  CHECK(mode_energy(Mode::rvprd, 1.0, 0.5, D1, D2, 0.0, 2.0) == 1.5);
}

TEST_CASE("record spacing must be uniform") {
  auto s = damped_series(4, 1.0);
  CHECK(uniform_spacing(s) == doctest::Approx(0.25));
  s[2].t += 0.01;
  CHECK_THROWS_AS(uniform_spacing(s), CadenceError);
  CHECK_THROWS_AS(uniform_spacing(damped_series(1, 1.0)), CadenceError);
}

TEST_CASE("dissipation residual is second order on an exact solution") {
  std::vector<double> maxima;
  for (int K : {8, 16, 32}) maxima.push_back(max_abs(dissipation_residual(damped_series(K, 1.0), 1.0)));
  CHECK(order_estimate(maxima) == doctest::Approx(2.0).epsilon(0.05));
  CHECK(monotonicity_violations(damped_series(8, 1.0), 1.0).empty());
}

TEST_CASE("dipole chain residuals are second order") {
  std::vector<double> d, c, f;
  for (int K : {8, 16, 32}) {
    ChainResiduals r = chain_residuals(oscillator(K, 1.0), 0.0, 1.0);
    d.push_back(max_abs(r.dipole));
    c.push_back(max_abs(r.current));
    f.push_back(max_abs(r.field));
  }
  CHECK(order_estimate(d) == doctest::Approx(2.0).epsilon(0.05));
  CHECK(order_estimate(c) == doctest::Approx(2.0).epsilon(0.05));
  CHECK(order_estimate(f) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("envelope check reports the first crossing") {
  SupportEnvelope env = support_envelope(0.004, 0.01, 1.0);
  auto s = damped_series(4, 0.2);
  for (auto& r : s) {
    r.maxp = 0.9;
    r.maxx = 0.9;
  }
  CHECK(envelope_check(s, env).pass);
  s[3].maxp = 5.0;
  EnvelopeCheck e = envelope_check(s, env);
  CHECK_FALSE(e.pass);
  REQUIRE(e.first_failure);
  CHECK(*e.first_failure == 3);
  CHECK(e.min_margin_p < 0.0);
}

TEST_CASE("check lines carry exactly four keys") {
  CheckResult c{"mass_conservation", true, 1e-16, std::nullopt, "detail stays out"};
  auto j = nlohmann::json::parse(to_ndjson(c));
  CHECK(j.size() == 4);
  CHECK(j["check"] == "mass_conservation");
  CHECK(j["status"] == "pass");
  CHECK(j["order_estimate"].is_null());
  c.order_estimate = 2.01;
  c.pass = false;
  j = nlohmann::json::parse(to_ndjson(c));
  CHECK(j["status"] == "fail");
  CHECK(j["order_estimate"] == 2.01);
}

TEST_CASE("convergence report on factorial, stalled and exact sequences") {
  std::vector<double> fact;
  double a = 0.3;
  for (int n = 1; n <= 8; ++n) {
    fact.push_back(a);
    a *= 0.05 / n;
  }
  ConvergenceSummary s = convergence_report(report_with(fact));
  CHECK_FALSE(s.exact);
  CHECK_FALSE(s.super_envelope);
  CHECK(s.fitted_c3t == doctest::Approx(0.05).epsilon(1e-6));
  for (double r : s.residuals) CHECK(r >= 0.0);

  auto stalled = fact;
  stalled[4] = stalled[3] * 0.9;
  CHECK(convergence_report(report_with(stalled)).super_envelope);

  CHECK(convergence_report(report_with({0.3, 0.0, 0.0, 0.0})).exact);
  CHECK_THROWS_AS(convergence_report(report_with({0.3, 0.1})), ConvergenceError);
}

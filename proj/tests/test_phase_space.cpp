#include "test_main.hpp"

#include <cmath>
#include <numbers>

#include "rvprd/config.hpp"
#include "rvprd/errors.hpp"
#include "rvprd/parallel.hpp"
#include "rvprd/phase_space.hpp"

using namespace rvprd;

namespace {

InitialDatum default_datum() { return make_datum(DatumConfig{}); }

double sum_weights(const ParticleEnsemble& e) {
  double s = 0.0;
  for (double w : e.w) s += w;
  return s;
}

double relative_mass_error(int m) {
  InitialDatum d = default_datum();
  double M = sum_weights(sample_particles(d, Species::plus, m));
  return std::fabs(M / d.norms(Species::plus).l1 - 1.0);
}

}  // namespace

TEST_CASE("datum evaluation follows the bump profile") {
  InitialDatum d = default_datum();
  const auto& s = d.profile(Species::plus);
  const double A = s.amplitude, R = d.spatial_radius();
  CHECK(d.evaluate(Species::plus, s.center_x, s.center_p) == A);
  CHECK(d.evaluate(Species::plus, s.center_x + Vec3{R, 0.0, 0.0}, s.center_p) == 0.0);
  double half = d.evaluate(Species::plus, s.center_x + Vec3{0.0, 0.5 * R, 0.0}, s.center_p);
  CHECK(half == doctest::Approx(A * std::exp(-1.0 / 3.0)).epsilon(1e-15));
  CHECK(d.evaluate(Species::minus, s.center_x, s.center_p) < A);
}

TEST_CASE("zero amplitude gives an empty ensemble") {
  InitialDatum d = default_datum().scaled(0.0);
  CHECK(sample_particles(d, Species::plus, 6).size() == 0);
}

TEST_CASE("particle budget is enforced") {
  CHECK_THROWS_AS(sample_particles(default_datum(), Species::plus, 12, 1e6), ResourceError);
}

TEST_CASE("sampling is deterministic") {
  auto a = sample_particles(default_datum(), Species::minus, 8);
  auto b = sample_particles(default_datum(), Species::minus, 8);
  CHECK(a.x == b.x);
  CHECK(a.p == b.p);
  CHECK(a.w == b.w);
}

TEST_CASE("weights integrate the datum") {
  double e8 = relative_mass_error(8), e16 = relative_mass_error(16);
  MESSAGE("mass error m=8 " << e8 << ", m=16 " << e16);
  CHECK(e16 <= 1e-3);
  CHECK(e16 < e8);
}

TEST_CASE("deposition conserves weight and momentum") {
  RunConfig c;
  RunSetup s = resolve_setup(c);
  auto e = sample_particles(s.datum, Species::plus, 8);
  Moments m = deposit_moments(e, s.grid);
  double W = 0.0;
  Vec3 J{};
  for (std::size_t i = 0; i < e.size(); ++i) {
    W += e.w[i];
    J = J + e.w[i] * e.p[i];
  }
  CHECK(integrate(m.rho) == doctest::Approx(W).epsilon(1e-12));
  Vec3 Jg = integrate(m.j);
  CHECK(norm(Jg - J) <= 1e-12 * W);
}

TEST_CASE("empty ensembles deposit nothing and have no mass") {
  ParticleEnsemble e;
  Moments m = deposit_moments(e, GridSpec{1.0, 16});
  CHECK(max_abs(m.rho) == 0.0);
  CHECK(max_norm(m.j) == 0.0);
  CHECK(bare_mass(e, e) == 0.0);
}

TEST_CASE("particles outside the safe domain are reported") {
  ParticleEnsemble e;
  e.x = {{0.0, 0.0, 0.0}, {0.95, 0.0, 0.0}};
  e.p = {{}, {}};
  e.w = {1.0, 1.0};
  try {
    deposit_moments(e, GridSpec{1.0, 16}, 0.25);
    FAIL("no overflow reported");
  } catch (const DomainOverflowError& err) {
    CHECK(err.particle_index == 1);
    CHECK(err.time == 0.25);
  }
}

TEST_CASE("deposition is identical for any worker count") {
  RunSetup s = resolve_setup(RunConfig{});
  auto e = sample_particles(s.datum, Species::plus, 8);
  const int saved = thread_count();
  set_thread_count(1);
  Moments a = deposit_moments(e, s.grid);
  set_thread_count(5);
  Moments b = deposit_moments(e, s.grid);
  set_thread_count(saved);
  CHECK(a.rho.values == b.rho.values);
  CHECK(a.j.comp == b.j.comp);
}

TEST_CASE("stored norms agree with direct quadrature") {
  InitialDatum d = default_datum();
  // 4 pi int_0^R s^2 bump(s/R) ds by the midpoint rule
  auto ball = [](double R) {
    const int K = 200000;
    double h = R / K, sum = 0.0;
    for (int k = 0; k < K; ++k) {
      double s = (k + 0.5) * h;
      sum += s * s * bump(s / R);
    }
    return 4.0 * std::numbers::pi * sum * h;
  };
  double A = d.profile(Species::plus).amplitude;
  double l1 = A * ball(d.spatial_radius()) * ball(d.momentum_radius());
  CHECK(d.norms(Species::plus).l1 == doctest::Approx(l1).epsilon(1e-6));
  CHECK(d.norms(Species::plus).sup == A);
}

TEST_CASE("deposition is linear in the ensemble") {
  RunSetup s = resolve_setup(RunConfig{});
  auto a = sample_particles(s.datum, Species::plus, 6);
  auto b = sample_particles(s.datum, Species::plus, 5);
  ParticleEnsemble ab = a;
  ab.x.insert(ab.x.end(), b.x.begin(), b.x.end());
  ab.p.insert(ab.p.end(), b.p.begin(), b.p.end());
  for (double w : b.w) ab.w.push_back(-2.0 * w);
  ParticleEnsemble b2 = b;
  for (double& w : b2.w) w *= -2.0;
  Moments ma = deposit_moments(a, s.grid), mb = deposit_moments(b2, s.grid), mab = deposit_moments(ab, s.grid);
  ScalarField sum = axpby(1.0, ma.rho, 1.0, mb.rho);
  double scale = max_abs(ma.rho);
  CHECK(max_abs(axpby(1.0, mab.rho, -1.0, sum)) <= 1e-13 * scale);
  VectorField jsum = axpby(1.0, ma.j, 1.0, mb.j);
  CHECK(max_norm(axpby(1.0, mab.j, -1.0, jsum)) <= 1e-13 * scale * s.datum.momentum_radius());
}

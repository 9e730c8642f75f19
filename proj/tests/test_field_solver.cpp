#include "test_main.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "rvprd/errors.hpp"
#include "rvprd/field_solver.hpp"
#include "rvprd/phase_space.hpp"
#include "rvprd/verification.hpp"

using namespace rvprd;

namespace {

ScalarField ball(int n, double R) { return verify::radial_bump(GridSpec{1.0, n}, R); }

double shell_error(int n) {
  GridSpec g{1.0, n};
  VectorField E = solve_field_spectral(ball(n, 0.5));
  auto exact = verify::shell_theorem_field(g, [](double s) { return bump(s / 0.5); }, 0.5);
  return verify::relative_linf(E, exact, 2.0 * g.spacing());
}

}  // namespace

TEST_CASE("zero density gives zero field") {
  ScalarField rho(GridSpec{1.0, 16});
  VectorField E = solve_field_spectral(rho);
  CHECK(max_norm(E) == 0.0);
}

TEST_CASE("equal and opposite deposits cancel exactly") {
  ScalarField a = ball(16, 0.4);
  VectorField E = solve_field_spectral(axpby(1.0, a, -1.0, a));
  CHECK(max_norm(E) == 0.0);
}

TEST_CASE("spectral field converges to the radial quadrature oracle") {
  double e32 = shell_error(32), e64 = shell_error(64);
  MESSAGE("shell error n=32 " << e32 << ", n=64 " << e64);
  CHECK(e64 < e32 / 8.0);
}

TEST_CASE("direct oracle reproduces a point monopole") {
  GridSpec g{1.0, 16};
  ScalarField rho(g);
  const double q = 0.7;
  rho.at(7, 7, 7) = q / g.cell_volume();
  Vec3 y = g.position(7, 7, 7);
  const double d = 0.3;
  std::vector<Vec3> query{y + Vec3{d, 0.0, 0.0}};
  Vec3 E = field_direct_oracle(rho, query)[0];
  CHECK(E.x == doctest::Approx(q / (d * d)).epsilon(1e-14));
  CHECK(std::fabs(E.y) < 1e-14);
  CHECK(std::fabs(E.z) < 1e-14);
}

TEST_CASE("potential matches the monopole outside the support") {
  GridSpec g{1.0, 32};
  ScalarField rho = ball(32, 0.4);
  ScalarField u = solve_potential_spectral(rho);
  double Q = integrate(rho);
  int i = g.nodes - 4;
  Vec3 x = g.position(i, g.nodes / 2, g.nodes / 2);
  // the sampled ball keeps small lattice multipoles
  CHECK(u.at(i, g.nodes / 2, g.nodes / 2) == doctest::Approx(Q / norm(x)).epsilon(1e-4));
}

TEST_CASE("density outside the half-domain is rejected") {
  GridSpec g{1.0, 16};
  ScalarField rho(g);
  rho.at(0, 8, 8) = 1.0;
  CHECK_THROWS_AS(solve_field_spectral(rho), SupportViolationError);
}

TEST_CASE("field respects the sup bound for a radial bump") {
  ScalarField rho = ball(32, 0.5);
  VectorField E = solve_field_spectral(rho);
  CHECK(max_norm(E) <= field_sup_bound(rho));
}

TEST_CASE("non power-of-two grids are supported") {
  VectorField E = solve_field_spectral(ball(48, 0.5));
  CHECK(max_norm(E) > 0.0);
}

TEST_CASE("interpolation is exact for linear fields and bounded to the safe domain") {
  GridSpec g{1.0, 16};
  VectorField f(g);
  for (int k = 0; k < g.nodes; ++k)
    for (int j = 0; j < g.nodes; ++j)
      for (int i = 0; i < g.nodes; ++i) {
        Vec3 x = g.position(i, j, k);
        f.set(g.index(i, j, k), {x.x + 2.0 * x.y, -x.z, 0.5});
      }
  Vec3 p{0.123, -0.31, 0.27};
  Vec3 v = interpolate_field(f, p);
  CHECK(v.x == doctest::Approx(p.x + 2.0 * p.y).epsilon(1e-13));
  CHECK(v.y == doctest::Approx(-p.z).epsilon(1e-13));
  CHECK(v.z == doctest::Approx(0.5).epsilon(1e-13));
  CHECK_THROWS_AS(interpolate_field(f, Vec3{0.99, 0.0, 0.0}), OutOfDomainError);
}

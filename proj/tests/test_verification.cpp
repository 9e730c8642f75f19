#include "test_main.hpp"

#include <cmath>
#include <numbers>

#include "rvprd/verification.hpp"

using namespace rvprd;
using namespace rvprd::verify;

TEST_CASE("enclosed charge of a uniform ball") {
  auto one = [](double) { return 1.0; };
  CHECK(enclosed_charge(one, 0.3, 0.5) == doctest::Approx(4.0 * std::numbers::pi * 0.027 / 3.0).epsilon(1e-14));
  CHECK(enclosed_charge(one, 0.9, 0.5) == doctest::Approx(4.0 * std::numbers::pi * 0.125 / 3.0).epsilon(1e-14));
}

TEST_CASE("shell oracle of a uniform ball is linear inside and Coulomb outside") {
  GridSpec g{1.0, 16};
  VectorField E = shell_theorem_field(g, [](double) { return 1.0; }, 0.5);
  const double Q = 4.0 * std::numbers::pi * 0.125 / 3.0;
  for (std::size_t i = 0; i < g.size(); i += 37) {
    Vec3 x = g.position(static_cast<int>(i % 16), static_cast<int>(i / 16 % 16), static_cast<int>(i / 256));
    double r = norm(x);
    Vec3 expected = r < 0.5 ? (4.0 * std::numbers::pi / 3.0) * x : (Q / (r * r * r)) * x;
    CHECK(norm(E.at(i) - expected) <= 1e-12 * norm(expected));
  }
}

TEST_CASE("analytic gradient and curl fields") {
  GridSpec g{1.0, 16};
  VectorField grad = radial_bump_gradient(g, 0.5), curl = radial_bump_curl(g, 0.5);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(std::fabs(dot(grad.at(i), curl.at(i))) <= 1e-14);
    CHECK(curl.at(i).z == 0.0);
  }
  // finite-difference check of one gradient component at an interior node
  double d = 1e-6, R = 0.5;
  Vec3 x = g.position(9, 8, 7);
  double fd = (bump(norm(x + Vec3{d, 0, 0}) / R) - bump(norm(x - Vec3{d, 0, 0}) / R)) / (2 * d);
  CHECK(grad.at(g.index(9, 8, 7)).x == doctest::Approx(fd).epsilon(1e-7));
}

TEST_CASE("random currents are reproducible and stay in the half-domain") {
  GridSpec g{1.0, 16};
  VectorField a = random_smooth_current(g, 42), b = random_smooth_current(g, 42), c = random_smooth_current(g, 43);
  CHECK(a.comp == b.comp);
  CHECK(a.comp != c.comp);
  CHECK(vanishes_outside(a, 0.5));
}

TEST_CASE("comparison helpers") {
  GridSpec g{1.0, 8};
  VectorField a(g), b(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    a.set(i, {1.0, 0.0, 0.0});
    b.set(i, {1.1, 0.0, 0.0});
  }
  CHECK(relative_l2(b, a) == doctest::Approx(0.1));
  CHECK(relative_linf(b, a, 0.0) == doctest::Approx(0.1));
  CHECK(min_ratio({16.0, 4.0, 2.0}) == 2.0);
}

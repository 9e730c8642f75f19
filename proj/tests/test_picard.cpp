#include "test_main.hpp"

#include <cmath>

#include "rvprd/dynamics.hpp"
#include "rvprd/errors.hpp"
#include "rvprd/picard.hpp"

using namespace rvprd;

namespace {

RunConfig small() {
  RunConfig c;
  c.picard.nodes = 16;
  c.picard.sampling = 6;
  c.picard.time_points = 16;
  c.picard.markers = 128;
  return c;
}

}  // namespace

TEST_CASE("identical species converge after one iteration") {
  RunConfig c = small();
  c.datum.minus = c.datum.plus;
  PicardReport r = picard_solve(c, 4);
  REQUIRE(r.alpha.size() == 4);
  CHECK(r.alpha[0] > 0.0);
  for (std::size_t n = 1; n < r.alpha.size(); ++n) CHECK(r.alpha[n] == 0.0);
  CHECK(convergence_report(r).exact);
}

TEST_CASE("successive displacements contract factorially") {
  PicardReport r = picard_solve(small(), 6);
  const auto& a = r.alpha;
  const double floor = alpha_floor(r);
  for (std::size_t n = 2; n < a.size(); ++n) CHECK((a[n] < a[n - 1] || a[n] <= floor));
  ConvergenceSummary s = convergence_report(r);
  CHECK_FALSE(s.super_envelope);
  CHECK_FALSE(r.diverging);
  CHECK(r.records.size() == static_cast<std::size_t>(r.time_points + 1));
}

TEST_CASE("bad iteration counts and horizons are refused") {
  RunConfig c = small();
  CHECK_THROWS_AS(picard_solve(c, 1), ConfigError);
  c.picard.horizon_fraction = 1.0;
  CHECK_THROWS_AS(picard_solve(c, 3), HorizonError);
}

TEST_CASE("Picard limit matches the time stepper") {
  RunConfig c;  // default Picard resolution
  // with substeps the iteration interpolates its force history in time, so it
  // is a different discretization from the stepper
  c.picard.substeps = 2;
  PicardReport r = picard_solve(c, 6);
  RunConfig direct;
  direct.nodes = c.picard.nodes;
  direct.sampling = c.picard.sampling;
  direct.horizon = r.horizon;
  direct.extent = r.grid.extent;
  direct.dt = r.horizon / r.time_points;
  direct.cadence = 1;
  auto recs = run(direct).records;
  REQUIRE(recs.size() == r.records.size());
  double diff = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < recs.size(); ++k) {
    CHECK(recs[k].t == doctest::Approx(r.records[k].t));
    diff = std::max(diff, norm(recs[k].dip.D2 - r.records[k].dip.D2));
    scale = std::max(scale, norm(recs[k].dip.D2));
  }
  MESSAGE("max |D2 picard - D2 step| / max |D2| = " << diff / scale);
  CHECK(diff <= 1e-2 * scale);
}

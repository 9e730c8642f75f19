#include "test_main.hpp"

#include <string>

#include "rvprd/config.hpp"
#include "rvprd/errors.hpp"

using namespace rvprd;

namespace {

std::string error_path(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.path;
  }
  return "";
}

}  // namespace

TEST_CASE("empty object gives the defaults") {
  RunConfig c = parse_config("{}");
  CHECK(c == RunConfig{});
  CHECK(c.epsilon == 0.0);
  CHECK(c.nodes == 64);
  CHECK(c.sampling == 12);
  CHECK(c.mode == Mode::rvprd);
}

TEST_CASE("epsilon outside [0,1] names the field and the bound") {
  try {
    parse_config(R"({"epsilon": 2})");
    FAIL("accepted epsilon = 2");
  } catch (const ConfigError& e) {
    CHECK(e.path == "epsilon");
    CHECK(std::string(e.what()).find("[0,1]") != std::string::npos);
  }
}

TEST_CASE("schema and semantic violations carry the field path") {
  CHECK(error_path(R"({"bogus": 1})") == "bogus");
  CHECK(error_path(R"({"grid": {"n": 48}})") == "grid.n");
  CHECK(error_path(R"({"grid": {"n": "big"}})") == "grid.n");
  CHECK(error_path(R"({"sampling": {"m": 3}})") == "sampling.m");
  CHECK(error_path(R"({"dt": -0.1})") == "dt");
  CHECK(error_path(R"({"mode": "maxwell"})") == "mode");
  CHECK(error_path(R"({"datum": {"plus": {"spin": 1}}})") == "datum.plus.spin");
  CHECK(error_path("[1, 2]") != "");
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
}

TEST_CASE("serialize then parse round-trips") {
  RunConfig c;
  c.mode = Mode::reduction21;
  c.epsilon = 0.3;
  c.dt = 0.0123456789;
  c.horizon = 0.4;
  c.extent = 3.5;
  c.nodes = 32;
  c.sampling = 6;
  c.datum.plus.amplitude = 0.0017;
  c.datum.minus.center_p = {0.01, -0.02, 0.03};
  c.cadence = 3;
  c.snapshots = true;
  c.output_dir = "runs/a";
  c.override_horizon = true;
  c.picard.iterations = 5;
  c.sweep_epsilons = {0.0, 0.25};
  CHECK(parse_config(serialize_config(c)) == c);
  CHECK(parse_config(serialize_config(RunConfig{})) == RunConfig{});
}

TEST_CASE("resolve_setup applies the documented defaults") {
  RunConfig c;
  RunSetup s = resolve_setup(c);
  CHECK(s.horizon == doctest::Approx(0.5 * s.envelope.a));
  CHECK(s.grid.extent == doctest::Approx(2.5 * s.envelope.X(s.horizon)));
  CHECK(s.grid.nodes == 64);
  double dt0 = std::min(0.01, 0.1 * s.grid.spacing() / s.envelope.P(0.0));
  CHECK(s.dt <= dt0);
  CHECK(s.steps % c.cadence == 0);
  CHECK(s.dt * s.steps == doctest::Approx(s.horizon).epsilon(1e-14));
}

TEST_CASE("horizons at or past blow-up need the override") {
  RunConfig c;
  c.horizon = 2.0;
  CHECK_THROWS_AS(resolve_setup(c), HorizonError);
  c.override_horizon = true;
  c.extent = 20.0;
  CHECK_NOTHROW(resolve_setup(c));
}

TEST_CASE("a domain too small for the envelope is rejected") {
  RunConfig c;
  c.extent = 1.0;
  try {
    resolve_setup(c);
    FAIL("accepted a small domain");
  } catch (const ConfigError& e) {
    CHECK(e.path == "grid.L");
  }
}

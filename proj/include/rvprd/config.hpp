#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rvprd/envelope.hpp"
#include "rvprd/grid.hpp"
#include "rvprd/phase_space.hpp"

namespace rvprd {

enum class Mode { rvprd, reduction21, vlasov_poisson };

const char* mode_name(Mode m);
Mode parse_mode(const std::string& s);  // throws ConfigError("mode", ...)

struct DatumConfig {
  double spatial_radius = 0.8;
  double momentum_radius = 1.0;
  SpeciesProfile plus{0.002, {0.2, 0.0, 0.0}, {0.0, 0.0, 0.0}};
  SpeciesProfile minus{0.002, {-0.2, 0.0, 0.0}, {0.0, 0.0, 0.0}};

  friend bool operator==(const DatumConfig&, const DatumConfig&) = default;
};

struct PicardConfig {
  int iterations = 8;
  int nodes = 32;             // grid n for the iteration
  int sampling = 8;           // m for the iteration
  double horizon_fraction = 0.25;
  int time_points = 32;       // force-history grid intervals on [0, T]
  int substeps = 1;           // integration steps per history interval
  int markers = 512;          // tracked particles per species for alpha_n

  friend bool operator==(const PicardConfig&, const PicardConfig&) = default;
};

struct RunConfig {
  Mode mode = Mode::rvprd;
  double epsilon = 0.0;
  std::optional<double> dt;           // default min(0.01, 0.1 h / P(0))
  std::optional<double> horizon;      // T; default horizon_fraction * a
  double horizon_fraction = 0.5;
  std::optional<double> extent;       // L; default 2.5 X(T)
  int nodes = 64;                     // n
  int sampling = 12;                  // m
  DatumConfig datum;
  int cadence = 2;                    // steps between records
  bool snapshots = false;
  std::optional<std::string> output_dir;
  bool override_horizon = false;
  PicardConfig picard;
  std::vector<double> sweep_epsilons{0.0, 0.1, 0.5, 1.0};

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses a JSON object, fills defaults and validates. Unknown keys are rejected.
/// Errors are ConfigError with the offending field path.
RunConfig parse_config(const std::string& text);

/// JSON text that parse_config maps back to an equal RunConfig.
std::string serialize_config(const RunConfig& c);

/// Semantic checks (n power of two, m >= 4, 0 <= eps <= 1, dt > 0, T >= 0, ...).
void validate_config(const RunConfig& c);

InitialDatum make_datum(const DatumConfig& d);

/// Resolved run parameters: T, grid and dt with defaults applied.
struct RunSetup {
  InitialDatum datum;
  SupportEnvelope envelope;
  double horizon = 0.0;
  GridSpec grid;
  double dt = 0.0;
  long steps = 0;
};

/// Applies defaults. The step count is T/dt rounded up to a multiple of the
/// output cadence, and dt is then reset to T/steps. Throws HorizonError when T >= a without override, and
/// ConfigError("grid.L", ...) when L <= 1.25 X(T) for T < a. The default
/// L = 2.5 X(T) keeps the envelope inside the half-domain the field solver
/// accepts; smaller L is allowed and checked against the particles every step.
RunSetup resolve_setup(const RunConfig& c);

}  // namespace rvprd

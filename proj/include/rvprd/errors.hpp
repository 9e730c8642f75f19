#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rvprd {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A particle left the region where deposition/interpolation stencils fit.
class DomainOverflowError : public Error {
 public:
  DomainOverflowError(std::size_t index, double time, const std::string& detail)
      : Error("particle " + std::to_string(index) + " left the safe domain at t=" +
              std::to_string(time) + ": " + detail),
        particle_index(index),
        time(time) {}
  std::size_t particle_index;
  double time;
};

/// A source field is nonzero outside the region the free-space solver accepts.
class SupportViolationError : public Error {
 public:
  using Error::Error;
};

class GridMismatchError : public Error {
 public:
  using Error::Error;
};

class ResolutionError : public Error {
 public:
  using Error::Error;
};

class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Configuration problem; `path` names the offending field ("grid.n", "epsilon", ...).
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& what)
      : Error(path + ": " + what), path(std::move(path)) {}
  std::string path;
};

/// Requested horizon is at or beyond the envelope blow-up time.
class HorizonError : public Error {
 public:
  HorizonError(double requested, double blowup)
      : Error("horizon T=" + std::to_string(requested) +
              " is not below the envelope blow-up time a=" + std::to_string(blowup) +
              " (pass --override-horizon to run anyway)"),
        requested(requested),
        blowup(blowup) {}
  double requested;
  double blowup;
};

class CadenceError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace rvprd

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "rvprd/config.hpp"
#include "rvprd/diagnostics.hpp"
#include "rvprd/dynamics.hpp"

namespace rvprd {

enum class Command { solve, picard, envelope, selftest, sweep };

const char* command_name(Command c);
Command parse_command(const std::string& s);  // throws ConfigError("command", ...)

/// Checks that apply to a single solve: mass, field bound, envelope, energy monotonicity.
std::vector<CheckResult> solve_checks(const RunResult& result, const RunConfig& config);

/// Runs a command and writes its artifacts under `out`:
///   solve    moments.csv, checks.ndjson, snapshots/ when enabled
///   picard   picard.csv, checks.ndjson
///   envelope envelope.csv, checks.ndjson
///   selftest checks.ndjson (one line per acceptance criterion)
///   sweep    eps_<value>/ per epsilon (as solve), comparison.csv, checks.ndjson
/// Returns 0 iff every check passed, 1 otherwise. Reports are written either way.
/// Module errors propagate.
int execute(const RunConfig& config, Command command, const std::filesystem::path& out, std::ostream& log);

}  // namespace rvprd

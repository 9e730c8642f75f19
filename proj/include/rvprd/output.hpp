#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rvprd/diagnostics.hpp"
#include "rvprd/envelope.hpp"
#include "rvprd/picard.hpp"

namespace rvprd {

/// Column header of moments.csv.
extern const char* const kMomentsHeader;

/// One CSV row, 17 significant digits per value.
std::string moments_row(const MomentRecord& r);
void write_moments_csv(const std::filesystem::path& path, const std::vector<MomentRecord>& records);
std::vector<MomentRecord> read_moments_csv(const std::filesystem::path& path);

void write_checks_ndjson(const std::filesystem::path& path, const std::vector<CheckResult>& checks);

/// n,alpha,field_diff,d3_diff
void write_picard_csv(const std::filesystem::path& path, const PicardReport& report);

/// Header comment with a, then t,P,X rows on a uniform grid of `samples` intervals over [0, t_end].
void write_envelope_csv(const std::filesystem::path& path, const SupportEnvelope& env, double t_end, int samples);

/// Writes text to a file, throwing Error with the path on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace rvprd

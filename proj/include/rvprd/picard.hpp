#pragma once

#include <vector>

#include "rvprd/config.hpp"
#include "rvprd/diagnostics.hpp"

namespace rvprd {

/// Successive characteristic solves under frozen force histories.
///
/// Z_0 is the identity map. Z_n integrates every particle over [0, T] under
/// the force history (E, D3, D2 on a uniform time grid) deposited from Z_{n-1},
/// using kick-drift-kick with linear interpolation in time and CIC in space.
struct PicardReport {
  double horizon = 0.0;
  GridSpec grid;
  int time_points = 0;
  /// alpha[n-1] = sup over markers and grid times of |Z_n - Z_{n-1}| (6-vector norm), n = 1..N.
  std::vector<double> alpha;
  /// field_diff[n-1] = max over grid times of ||E_n - E_{n-1}||_inf, likewise for D3.
  std::vector<double> field_diff;
  std::vector<double> d3_diff;
  /// Moments along the last iterate at the grid times.
  std::vector<MomentRecord> records;
  /// alpha grew for 3 consecutive iterations past n = 3.
  bool diverging = false;
};

/// Runs `iterations` solves (>= 2) on [0, picard.horizon_fraction * a] using the
/// picard.* grid and sampling settings. Throws HorizonError if T >= a.
PicardReport picard_solve(const RunConfig& config, int iterations);

}  // namespace rvprd

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace rvprd {

using Spectrum = std::vector<std::complex<double>>;

/// Real 3D transforms on the zero-padded grid of size N = 2n per axis.
///
/// Inputs are n^3 real arrays (x fastest) placed in the low corner of the
/// padded cube; spectra hold the non-redundant half along x, laid out as
/// [kx + (N/2+1) * (ky + N * kz)]. Transforms are unnormalized. Lines are
/// transformed independently with identical plans, so results do not depend
/// on the worker count. Lines known to be zero are skipped.
class PaddedFft {
 public:
  explicit PaddedFft(int n);
  ~PaddedFft();
  PaddedFft(const PaddedFft&) = delete;
  PaddedFft& operator=(const PaddedFft&) = delete;

  int original() const { return n_; }
  int padded() const { return N_; }
  int half() const { return Nh_; }
  std::size_t spectrum_size() const { return static_cast<std::size_t>(Nh_) * N_ * N_; }

  void forward(const std::vector<double>& field, Spectrum& out) const;
  /// Consumes `spec` as scratch. Writes only the original n^3 block into `field`.
  void inverse(Spectrum& spec, std::vector<double>& field) const;

  /// Signed frequency index for a padded-axis index.
  int signed_index(int m) const { return m < N_ / 2 ? m : m - N_; }

 private:
  int n_, N_, Nh_;
  void* plan_r2c_ = nullptr;
  void* plan_c2r_ = nullptr;
  void* plan_fwd_ = nullptr;
  void* plan_bwd_ = nullptr;
};

}  // namespace rvprd

#include "rvprd/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

#include "rvprd/parallel.hpp"

namespace rvprd {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

PaddedFft::PaddedFft(int n) : n_(n), N_(2 * n), Nh_(n + 1) {
  std::lock_guard lock(planner_mutex());
  std::vector<double> r(N_);
  Spectrum c(N_), c2(N_);
  unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  plan_r2c_ = fftw_plan_dft_r2c_1d(N_, r.data(), as_fftw(c.data()), flags);
  plan_c2r_ = fftw_plan_dft_c2r_1d(N_, as_fftw(c.data()), r.data(), flags);
  plan_fwd_ = fftw_plan_dft_1d(N_, as_fftw(c.data()), as_fftw(c2.data()), FFTW_FORWARD, flags);
  plan_bwd_ = fftw_plan_dft_1d(N_, as_fftw(c.data()), as_fftw(c2.data()), FFTW_BACKWARD, flags);
}

PaddedFft::~PaddedFft() {
  std::lock_guard lock(planner_mutex());
  for (void* p : {plan_r2c_, plan_c2r_, plan_fwd_, plan_bwd_})
    if (p) fftw_destroy_plan(static_cast<fftw_plan>(p));
}

void PaddedFft::forward(const std::vector<double>& field, Spectrum& out) const {
  const int n = n_, N = N_, Nh = Nh_;
  out.assign(spectrum_size(), {0.0, 0.0});
  auto r2c = static_cast<fftw_plan>(plan_r2c_);
  auto c2c = static_cast<fftw_plan>(plan_fwd_);

  // x lines: only the n*n lines that carry data.
  parallel_ranges(static_cast<std::size_t>(n) * n, [&](std::size_t b, std::size_t e) {
    std::vector<double> in(N, 0.0);
    for (std::size_t line = b; line < e; ++line) {
      std::size_t j = line % n, k = line / n;
      std::copy_n(field.data() + n * (j + n * k), n, in.data());
      fftw_execute_dft_r2c(r2c, in.data(), as_fftw(out.data() + Nh * (j + static_cast<std::size_t>(N) * k)));
    }
  });
  // y lines for kz planes that carry data.
  parallel_ranges(static_cast<std::size_t>(Nh) * n, [&](std::size_t b, std::size_t e) {
    Spectrum a(N), c(N);
    for (std::size_t line = b; line < e; ++line) {
      std::size_t kx = line % Nh, k = line / Nh;
      std::complex<double>* base = out.data() + kx + static_cast<std::size_t>(Nh) * N * k;
      for (int y = 0; y < N; ++y) a[y] = base[static_cast<std::size_t>(Nh) * y];
      fftw_execute_dft(c2c, as_fftw(a.data()), as_fftw(c.data()));
      for (int y = 0; y < N; ++y) base[static_cast<std::size_t>(Nh) * y] = c[y];
    }
  });
  // z lines, all of them.
  std::size_t plane = static_cast<std::size_t>(Nh) * N;
  parallel_ranges(plane, [&](std::size_t b, std::size_t e) {
    Spectrum a(N), c(N);
    for (std::size_t line = b; line < e; ++line) {
      std::complex<double>* base = out.data() + line;
      for (int z = 0; z < N; ++z) a[z] = base[plane * z];
      fftw_execute_dft(c2c, as_fftw(a.data()), as_fftw(c.data()));
      for (int z = 0; z < N; ++z) base[plane * z] = c[z];
    }
  });
}

void PaddedFft::inverse(Spectrum& spec, std::vector<double>& field) const {
  const int n = n_, N = N_, Nh = Nh_;
  field.assign(static_cast<std::size_t>(n) * n * n, 0.0);
  auto c2r = static_cast<fftw_plan>(plan_c2r_);
  auto c2c = static_cast<fftw_plan>(plan_bwd_);
  std::size_t plane = static_cast<std::size_t>(Nh) * N;

  parallel_ranges(plane, [&](std::size_t b, std::size_t e) {
    Spectrum a(N), c(N);
    for (std::size_t line = b; line < e; ++line) {
      std::complex<double>* base = spec.data() + line;
      for (int z = 0; z < N; ++z) a[z] = base[plane * z];
      fftw_execute_dft(c2c, as_fftw(a.data()), as_fftw(c.data()));
      for (int z = 0; z < N; ++z) base[plane * z] = c[z];
    }
  });
  parallel_ranges(static_cast<std::size_t>(Nh) * n, [&](std::size_t b, std::size_t e) {
    Spectrum a(N), c(N);
    for (std::size_t line = b; line < e; ++line) {
      std::size_t kx = line % Nh, k = line / Nh;
      std::complex<double>* base = spec.data() + kx + plane * k;
      for (int y = 0; y < N; ++y) a[y] = base[static_cast<std::size_t>(Nh) * y];
      fftw_execute_dft(c2c, as_fftw(a.data()), as_fftw(c.data()));
      for (int y = 0; y < N; ++y) base[static_cast<std::size_t>(Nh) * y] = c[y];
    }
  });
  parallel_ranges(static_cast<std::size_t>(n) * n, [&](std::size_t b, std::size_t e) {
    Spectrum a(Nh);
    std::vector<double> r(N);
    for (std::size_t line = b; line < e; ++line) {
      std::size_t j = line % n, k = line / n;
      // c2r destroys its input; copy the line first.
      std::copy_n(spec.data() + Nh * (j + static_cast<std::size_t>(N) * k), Nh, a.data());
      fftw_execute_dft_c2r(c2r, as_fftw(a.data()), r.data());
      std::copy_n(r.data(), n, field.data() + n * (j + n * k));
    }
  });
}

}  // namespace rvprd

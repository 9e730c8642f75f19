#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace rvprd {

/// Worker count used by all parallel loops. Defaults to hardware concurrency,
/// capped by RVPRD_THREADS when set.
int thread_count();

/// Overrides the worker count for the process (0 restores the default).
void set_thread_count(int n);

/// Runs body(i) for i in [0, count). Work is statically split into contiguous
/// ranges; the body must only write to locations owned by index i.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Range form: body(begin, end) over contiguous chunks of [0, count).
void parallel_ranges(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body);

/// Fixed block size for reproducible reductions. Partial sums are taken over
/// blocks of this many elements and combined serially in block order, so the
/// result does not depend on the number of workers.
inline constexpr std::size_t kReductionBlock = 4096;

/// Reproducible sum of term(i) for i in [0, count).
double reproducible_sum(std::size_t count, const std::function<double(std::size_t)>& term);

/// Reproducible sum with several accumulators at once. term(i, acc) adds into acc[0..width).
std::vector<double> reproducible_sums(std::size_t count, std::size_t width,
                                      const std::function<void(std::size_t, std::span<double>)>& term);

}  // namespace rvprd

#include "rvprd/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>

namespace rvprd {

namespace {

std::atomic<int> g_override{0};

int default_thread_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  if (const char* env = std::getenv("RVPRD_THREADS")) {
    try {
      int cap = std::stoi(env);
      if (cap > 0) n = cap;
    } catch (...) {
    }
  }
  return n;
}

}  // namespace

int thread_count() {
  int o = g_override.load();
  if (o > 0) return o;
  static const int n = default_thread_count();
  return n;
}

void set_thread_count(int n) { g_override.store(n > 0 ? n : 0); }

void parallel_ranges(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body) {
  if (count == 0) return;
  std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), count);
  if (workers <= 1) {
    body(0, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    std::size_t b = w * chunk;
    std::size_t e = std::min(count, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&body, b, e] { body(b, e); });
  }
  body(0, std::min(count, chunk));
  for (auto& t : pool) t.join();
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  parallel_ranges(count, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) body(i);
  });
}

std::vector<double> reproducible_sums(std::size_t count, std::size_t width,
                                      const std::function<void(std::size_t, std::span<double>)>& term) {
  std::size_t blocks = (count + kReductionBlock - 1) / kReductionBlock;
  std::vector<double> partial(blocks * width, 0.0);
  parallel_for(blocks, [&](std::size_t b) {
    std::span<double> acc(partial.data() + b * width, width);
    std::size_t end = std::min(count, (b + 1) * kReductionBlock);
    for (std::size_t i = b * kReductionBlock; i < end; ++i) term(i, acc);
  });
  std::vector<double> total(width, 0.0);
  for (std::size_t b = 0; b < blocks; ++b)
    for (std::size_t c = 0; c < width; ++c) total[c] += partial[b * width + c];
  return total;
}

double reproducible_sum(std::size_t count, const std::function<double(std::size_t)>& term) {
  return reproducible_sums(count, 1, [&](std::size_t i, std::span<double> acc) { acc[0] += term(i); })[0];
}

}  // namespace rvprd

// Prints one PASS/FAIL line per acceptance criterion; exit status 1 if any fail.
#include <cstdio>

#include "rvprd/verification.hpp"

int main() {
  rvprd::verify::AcceptanceOptions opt;
  opt.on_result = [](const rvprd::verify::CriterionResult& r) {
    std::printf("[%s] %2d %-38s %s (%.1f s)\n", r.pass ? "PASS" : "FAIL", r.id, r.title.c_str(), r.detail.c_str(),
                r.seconds);
    std::fflush(stdout);
  };
  int failed = 0;
  for (const auto& r : rvprd::verify::run_acceptance(opt)) failed += r.pass ? 0 : 1;
  std::printf("%d of 11 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}

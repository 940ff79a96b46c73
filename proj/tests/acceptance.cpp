// Acceptance gate: one line per criterion, nonzero exit if any criterion fails.
#include <cstdio>

#include "darkstate/acceptance.hpp"

int main() {
  int failed = 0;
  for (const auto& r : darkstate::run_acceptance()) {
    std::puts(darkstate::format_result(r).c_str());
    if (!r.passed) ++failed;
  }
  std::printf("%d of 12 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}

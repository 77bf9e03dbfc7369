// Runs the eleven acceptance criteria and prints one PASS/FAIL line per criterion.

#include <cstdio>

#include "hvol/selftest.hpp"

int main() {
  using namespace hvol::selftest;
  const auto results = run_suite(SuiteContext{});
  int failed = 0;
  for (const auto& r : results) {
    std::printf("%s criterion %d %s: %zu checks, %zu failed, %.2fs%s\n", r.pass() ? "PASS" : "FAIL", r.id, r.name.c_str(), r.checks.size(),
                r.failed_checks(), r.seconds, r.within_time() ? "" : " (over time limit)");
    if (!r.error.empty()) std::printf("  error: %s\n", r.error.c_str());
    for (const auto& c : r.checks)
      if (!c.pass) std::printf("  failed: %s lhs=%.17g rhs=%.17g tol=%g %s\n", c.name.c_str(), c.lhs, c.rhs, c.tolerance, c.note.c_str());
    if (!r.pass()) ++failed;
  }
  std::printf("%zu criteria, %d failed\n", results.size(), failed);
  return failed == 0 ? 0 : 1;
}

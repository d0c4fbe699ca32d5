// Acceptance gate: one line per criterion, non-zero exit if any fails.
#include <cstdio>

#include "epm/acceptance.hpp"

int main() {
  const auto suite = epm::acceptance_suite();
  int failed = 0;
  for (const epm::Criterion& c : suite) {
    std::printf("[%s] %-18s %s\n", c.passed() ? "PASS" : "FAIL", c.id.c_str(), c.title.c_str());
    for (const epm::CheckRecord& k : c.checks)
      std::printf("         %-28s measured=%-13.6g expected=%-11.6g tol=%-8.3g %-8s %s%s%s\n",
                  k.id.c_str(), k.measured, k.expected, k.tolerance, epm::to_string(k.comparison),
                  k.passed ? "ok" : "FAILED", k.note.empty() ? "" : "  # ", k.note.c_str());
    if (!c.passed()) ++failed;
  }
  std::printf("%zu criteria, %d failed\n", suite.size(), failed);
  return failed == 0 ? 0 : 1;
}

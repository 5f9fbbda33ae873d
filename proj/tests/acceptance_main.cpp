// Acceptance suite runner: one pass/fail line per criterion, nonzero exit on
// any failure. `ratelab selftest` drives the same suite.

#include <cstdio>
#include <cstring>
#include <string>

#include "ratelab/selftest.hpp"

int main(int argc, char** argv) {
  std::string filter;
  int workers = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--filter") == 0 && i + 1 < argc) {
      filter = argv[++i];
    } else if (std::strcmp(argv[i], "--workers") == 0 && i + 1 < argc) {
      workers = std::atoi(argv[++i]);
    }
  }
  auto results = ratelab::run_acceptance(filter, workers);
  bool all = true;
  for (const auto& r : results) {
    std::printf("[%s] %-26s %s (%.2fs)\n", r.pass ? "PASS" : "FAIL",
                r.name.c_str(), r.detail.c_str(), r.seconds);
    all = all && r.pass;
  }
  std::printf("%s\n", all ? "all criteria passed" : "FAILURES present");
  return all ? 0 : 1;
}

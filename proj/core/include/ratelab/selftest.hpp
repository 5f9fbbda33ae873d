#pragma once

#include <string>
#include <vector>

namespace ratelab {

struct CriterionResult {
  std::string name;
  bool pass;
  std::string detail;
  double seconds;
};

// Runs the acceptance criteria (all of them, or those whose name contains
// `filter`). Each criterion is self-contained and individually timed; the
// stated runtime limits are part of the pass condition.
std::vector<CriterionResult> run_acceptance(const std::string& filter = "",
                                            int workers = 0);

}  // namespace ratelab

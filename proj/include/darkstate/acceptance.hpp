#pragma once

#include <string>
#include <vector>

namespace darkstate {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Runs the twelve end-to-end acceptance checks in order.
std::vector<CriterionResult> run_acceptance();

/// "PASS  3  exceptional point location  (detail)"
std::string format_result(const CriterionResult& result);

}  // namespace darkstate

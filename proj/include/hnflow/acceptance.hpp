#pragma once

#include <string>
#include <vector>

namespace hnflow {

struct CriterionResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the acceptance criteria (all of them, or those whose name contains
/// `filter`). Each criterion is self-contained with pinned tolerances.
std::vector<CriterionResult> runAcceptanceSuite(const std::string& filter = "");

}  // namespace hnflow

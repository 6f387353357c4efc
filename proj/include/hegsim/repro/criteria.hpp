#pragma once

#include <string>
#include <vector>

namespace hegsim::repro {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

/// The ten release gates, run in order. Every gate appears in the result
/// whether it passed or not; callers print one line per entry. Tolerances
/// are pinned next to each gate's implementation.
std::vector<CriterionResult> run_all_criteria();

/// The built-in end-to-end scenario driven by the determinism gate. The
/// same document ships as scenarios/demo.json for CLI use; a test pins the
/// two copies together.
const std::string& demo_scenario_text();

}  // namespace hegsim::repro

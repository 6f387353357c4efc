#pragma once

#include "hegsim/scenario/config.hpp"
#include "hegsim/scenario/report.hpp"

namespace hegsim::scenario {

/// Executes a scripted scenario to completion. Deterministic: the report
/// (and its checksum) is a pure function of the config, with config.seed
/// feeding only the Monte Carlo oversight block. Event failures become
/// event outcomes, never exceptions; the run always produces a report.
RunReport run_scenario(const ScenarioConfig& config);

}  // namespace hegsim::scenario

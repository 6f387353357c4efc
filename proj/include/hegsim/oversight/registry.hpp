#pragma once

#include <set>
#include <string>
#include <vector>

#include "hegsim/core/jsonutil.hpp"
#include "hegsim/core/result.hpp"
#include "hegsim/core/rng.hpp"
#include "hegsim/oversight/types.hpp"

namespace hegsim::oversight {

/// Draws this period's on-site inspections: each non-destroyed entity is
/// selected independently at its kind's rate and lands on a uniform tick in
/// [period_start, period_end). Fails with MissingRateForKind when the plan
/// has no rate for a kind present in the registry. Events come back sorted
/// by (tick, entity_id) with outcome "scheduled".
Result<std::vector<InspectionEvent>> schedule_inspections(
    SplitMix64& rng, const std::vector<EntityRecord>& registry,
    const InspectionPlan& plan, Tick period_start, Tick period_end);

/// Audits one device's power history as of an inspection. Every off-gap
/// between recorded on-intervals, plus the tail gap from the last power-off
/// to the inspection tick, is flagged when it exceeds max_unexplained and
/// no explanation fully covers it. Gaps are clipped at the inspection tick;
/// time before the first power-on is treated as pre-deployment, not a gap.
/// Unsorted or overlapping intervals fail with MalformedLog.
Result<std::vector<FlaggedGap>> audit_power_log(const PowerLogRecord& log,
                                                Tick inspection_tick,
                                                Tick max_unexplained);

struct FlagResult {
  std::vector<EntityRecord> registry;  // statuses updated
  std::vector<std::string> referred;   // device ids to refer for denial
};

/// Closes an inspection round: every registered guarantee device that
/// failed to answer is marked Missing and referred for license denial;
/// a formerly Missing device that answers is restored to Present.
/// Destroyed entities are exempt, and tamper suspicion is not cleared by
/// merely answering.
FlagResult flag_missing(std::vector<EntityRecord> registry,
                        const std::set<std::string>& responses);

/// Registry interchange: a JSON array of records.
jsonutil::Json registry_to_json(const std::vector<EntityRecord>& registry);
Result<std::vector<EntityRecord>> registry_from_json(const jsonutil::Json& j,
                                                     const std::string& path);

/// Inspection log as CSV: tick,entity_id,kind,goal,outcome.
std::string inspection_csv(const std::vector<InspectionEvent>& events);

}  // namespace hegsim::oversight

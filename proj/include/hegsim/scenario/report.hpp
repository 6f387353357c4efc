#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hegsim/core/jsonutil.hpp"
#include "hegsim/core/result.hpp"
#include "hegsim/core/time.hpp"
#include "hegsim/oversight/types.hpp"
#include "hegsim/protocol/types.hpp"
#include "hegsim/stability/model.hpp"

namespace hegsim::scenario {

struct DeviceReport {
  std::string device_id;
  std::uint64_t serial = 0;
  std::uint64_t version = 0;
  protocol::Mode mode = protocol::Mode::Active;
  Tick clock = 0;
  Tick expiry = 0;
  std::optional<Tick> license_expiry;
};

struct EventOutcome {
  Tick tick = 0;
  std::string type;
  std::string target;
  std::string outcome;  // "ok" or the error that stopped the event
};

struct WorkloadTally {
  std::size_t allowed = 0;
  std::size_t denied = 0;
  std::map<std::string, std::size_t> deny_reasons;
};

struct ConflictReport {
  std::string approver;
  std::string first_name;
  std::string second_name;
  bool duplicate_serial = false;
  bool window_overlap = false;
};

struct GapReport {
  std::string device_id;
  Tick start = 0;
  Tick end = 0;
};

struct OversightReport {
  std::size_t population = 0;
  std::size_t compromised = 0;
  double sampling_rate = 0.0;
  std::size_t trials = 0;
  double analytic = 0.0;
  double monte_carlo = 0.0;
};

struct RunReport {
  std::uint64_t seed = 0;
  std::vector<EventOutcome> events;
  std::vector<DeviceReport> devices;
  WorkloadTally workloads;
  std::vector<ConflictReport> conflicts;
  std::vector<oversight::InspectionEvent> inspections;
  std::vector<GapReport> flagged_gaps;
  std::vector<std::string> referrals;
  std::vector<protocol::DenialRecord> denials;
  std::vector<oversight::EntityRecord> registry;
  std::vector<stability::SweepRow> stability_rows;
  std::optional<OversightReport> oversight;
  std::map<std::string, jsonutil::Json> artifacts;  // by scenario name
};

/// Full JSON form including a "checksum" field: SHA-256 over the compact
/// dump of everything else. Two runs agree iff their checksums do.
jsonutil::Json report_to_json(const RunReport& report);
std::string report_checksum(const RunReport& report);

/// Writes report.json and/or the CSV views (events.csv, devices.csv,
/// inspections.csv, conflicts.csv, stability_sweep.csv) into dir.
/// format is "json", "csv" or "both". Returns the paths written.
Result<std::vector<std::string>> emit_report(const RunReport& report,
                                             const std::string& dir,
                                             const std::string& format);

std::string events_csv(const std::vector<EventOutcome>& events);
std::string devices_csv(const std::vector<DeviceReport>& devices);
std::string conflicts_csv(const std::vector<ConflictReport>& conflicts);

}  // namespace hegsim::scenario

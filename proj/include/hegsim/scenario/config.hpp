#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hegsim/core/jsonutil.hpp"
#include "hegsim/core/result.hpp"
#include "hegsim/oversight/types.hpp"
#include "hegsim/protocol/types.hpp"

namespace hegsim::scenario {

/// Factory state of one simulated device.
struct DeviceSpec {
  std::string device_id;
  std::uint64_t serial = 1;
  std::uint64_t version = 1;
  Tick lifetime = 0;
  protocol::Ruleset ruleset;
  std::optional<protocol::LocationConfig> location;
};

enum class EventKind {
  ProposeUpdate,
  ProposeExtension,
  Sign,
  Install,
  Extend,
  AdvanceClock,
  Workload,
  LicenseIssue,
  LicenseDeny,
  LocationCheck,
  InspectionRound,
  TamperInject,
  Attest,
};

std::string to_string(EventKind k);
std::optional<EventKind> event_kind_from_string(const std::string& s);

/// One scripted event. The struct is deliberately flat: each kind reads
/// the fields it needs and the parser enforces per-kind requirements.
/// `tick` is global simulation time; every device is advanced to it before
/// the event applies.
struct Event {
  Tick tick = 0;
  EventKind kind = EventKind::AdvanceClock;

  std::string name;    // artifact name: propose_*, sign, install, extend
  std::string device;  // device id
  std::string target;  // propose_extension: name of the update to extend
  std::string issuer;  // license_issue / license_deny

  std::vector<std::string> signers;  // sign; empty = every policy approver
  bool bypass_transcript = false;    // sign: compromised-key signing

  std::uint64_t version = 0;                 // propose_update
  Tick lifetime = 0;                         // propose_update
  std::optional<protocol::Ruleset> ruleset;  // propose_update
  std::optional<Tick> issued_at;             // propose_update override

  std::optional<Tick> new_expiry;      // propose_extension
  std::optional<Tick> extends_expiry;  // propose_extension override

  std::optional<protocol::WorkloadDescriptor> workload;  // workload

  Tick duration = 0;                 // license_issue
  std::vector<std::string> devices;  // license_deny

  // location_check: (landmark id, reported distance) pairs
  std::vector<std::pair<std::string, double>> responses;

  std::vector<std::string> responders;  // inspection_round
  std::optional<Tick> max_unexplained;  // inspection_round power audit

  std::optional<PowerInterval> power_gap;  // tamper_inject
  std::string explanation;                 // tamper_inject: covers the gap
  std::string entity;                      // tamper_inject registry target
  std::string status;                      // tamper_inject status override
};

/// Cartesian parameter grids evaluated at u_c = 1.
struct StabilityGrid {
  std::vector<double> u_w;
  std::vector<double> p_doom;
  std::vector<double> p_w_given_d;
};

/// Monte Carlo block comparing the sampling formula against simulation.
struct OversightSpec {
  oversight::BatchScenario batch;
  std::size_t trials = 10000;
};

struct ScenarioConfig {
  std::uint64_t seed = 0;
  protocol::ApproverPolicy policy;
  std::vector<DeviceSpec> devices;
  std::vector<std::string> license_authorities;
  std::vector<oversight::EntityRecord> registry;  // extra, non-device entities
  std::vector<Event> events;
  std::optional<StabilityGrid> stability;
  std::optional<OversightSpec> oversight;
};

/// Parse outcome: either a config, or everything wrong with the document.
/// Violations carry JSON-pointer-style paths; independent sections are
/// validated even after earlier ones fail, so one pass reports all of them.
struct ConfigParse {
  std::optional<ScenarioConfig> config;
  std::vector<Error> violations;

  bool ok() const { return config.has_value() && violations.empty(); }
};

ConfigParse parse_config(const std::string& text);

/// Inverse of parse_config, for round-trip checks and fixture generation.
jsonutil::Json config_to_json(const ScenarioConfig& config);

}  // namespace hegsim::scenario

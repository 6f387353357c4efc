#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hegsim/core/time.hpp"

namespace hegsim::oversight {

/// The five inspectable entity kinds of the registry.
enum class EntityKind : std::uint8_t {
  FlexHEGDevice = 0,
  NonFlexHEGChip = 1,
  DataCenter = 2,
  FabFacility = 3,
  ManufacturingEquipment = 4,
};

/// Destroyed is terminal; Missing clears back to Present only by answering
/// a later inspection round.
enum class EntityStatus : std::uint8_t {
  Present = 0,
  Missing = 1,
  TamperSuspected = 2,
  Destroyed = 3,
};

struct EntityRecord {
  std::string entity_id;
  EntityKind kind = EntityKind::FlexHEGDevice;
  std::string registered_owner;
  std::string registered_location;
  EntityStatus status = EntityStatus::Present;
};

/// Production sampling rate plus per-kind on-site inspection rates.
struct InspectionPlan {
  double sampling_rate = 0.0;
  std::map<EntityKind, double> inspection_rates;
};

/// A smuggling attempt: n compromised devices hidden in a production run
/// of N, sampled at rate p, shipped to `customers` buyers. `batches`
/// partitions the run (sizes summing to N); by convention the compromised
/// devices are the first n indices.
struct BatchScenario {
  std::size_t population = 0;   // N
  std::size_t compromised = 0;  // n
  double sampling_rate = 0.0;   // p
  std::vector<std::size_t> batches;
  std::size_t customers = 1;
};

/// Intervals the device was powered on, sorted and disjoint, plus
/// free-text explanations covering known outages. An explanation accounts
/// for every off-gap it fully contains.
struct GapExplanation {
  Tick start = 0;
  Tick end = 0;
  std::string text;
};

struct PowerLogRecord {
  std::vector<PowerInterval> on_intervals;
  std::vector<GapExplanation> explanations;
};

struct FlaggedGap {
  Tick start = 0;
  Tick end = 0;

  Tick duration() const { return end - start; }
  friend bool operator==(const FlaggedGap&, const FlaggedGap&) = default;
};

struct InspectionEvent {
  Tick tick = 0;
  std::string entity_id;
  EntityKind kind = EntityKind::FlexHEGDevice;
  std::string goal;
  std::string outcome;  // "scheduled" until a round resolves it
};

std::string to_string(EntityKind k);
std::string to_string(EntityStatus s);
std::optional<EntityKind> entity_kind_from_string(const std::string& s);
std::optional<EntityStatus> entity_status_from_string(const std::string& s);

/// What an on-site inspection of each kind is meant to establish.
std::string inspection_goal(EntityKind k);

}  // namespace hegsim::oversight

#include "hegsim/oversight/registry.hpp"

#include <algorithm>
#include <tuple>

#include "hegsim/core/csv.hpp"

namespace hegsim::oversight {

namespace ju = hegsim::jsonutil;

std::string to_string(EntityKind k) {
  switch (k) {
    case EntityKind::FlexHEGDevice: return "flexheg_device";
    case EntityKind::NonFlexHEGChip: return "non_flexheg_chip";
    case EntityKind::DataCenter: return "data_center";
    case EntityKind::FabFacility: return "fab_facility";
    case EntityKind::ManufacturingEquipment: return "manufacturing_equipment";
  }
  return "unknown";
}

std::string to_string(EntityStatus s) {
  switch (s) {
    case EntityStatus::Present: return "present";
    case EntityStatus::Missing: return "missing";
    case EntityStatus::TamperSuspected: return "tamper_suspected";
    case EntityStatus::Destroyed: return "destroyed";
  }
  return "unknown";
}

std::optional<EntityKind> entity_kind_from_string(const std::string& s) {
  if (s == "flexheg_device") return EntityKind::FlexHEGDevice;
  if (s == "non_flexheg_chip") return EntityKind::NonFlexHEGChip;
  if (s == "data_center") return EntityKind::DataCenter;
  if (s == "fab_facility") return EntityKind::FabFacility;
  if (s == "manufacturing_equipment") return EntityKind::ManufacturingEquipment;
  return std::nullopt;
}

std::optional<EntityStatus> entity_status_from_string(const std::string& s) {
  if (s == "present") return EntityStatus::Present;
  if (s == "missing") return EntityStatus::Missing;
  if (s == "tamper_suspected") return EntityStatus::TamperSuspected;
  if (s == "destroyed") return EntityStatus::Destroyed;
  return std::nullopt;
}

std::string inspection_goal(EntityKind k) {
  switch (k) {
    case EntityKind::FlexHEGDevice:
      return "verify the registered owner still controls the device";
    case EntityKind::NonFlexHEGChip:
      return "verify the legacy chip remains at its registered site";
    case EntityKind::DataCenter:
      return "verify the installed fleet matches the registry";
    case EntityKind::FabFacility:
      return "verify all finished devices were registered before shipping";
    case EntityKind::ManufacturingEquipment:
      return "verify the production tool sits where registered and its output is accounted for";
  }
  return "";
}

Result<std::vector<InspectionEvent>> schedule_inspections(
    SplitMix64& rng, const std::vector<EntityRecord>& registry,
    const InspectionPlan& plan, Tick period_start, Tick period_end) {
  // Resolve every rate before drawing anything, so a bad plan cannot leave
  // the generator half-consumed.
  for (const auto& rec : registry) {
    if (rec.status == EntityStatus::Destroyed) continue;
    auto it = plan.inspection_rates.find(rec.kind);
    if (it == plan.inspection_rates.end()) {
      return Error{ErrorCode::MissingRateForKind, to_string(rec.kind)};
    }
    if (!(it->second >= 0.0 && it->second <= 1.0)) {
      return Error{ErrorCode::SchemaViolation,
                   "inspection rate for " + to_string(rec.kind) +
                       " outside [0,1]"};
    }
  }
  std::vector<InspectionEvent> events;
  const Tick span = period_end > period_start ? period_end - period_start : 0;
  for (const auto& rec : registry) {
    if (rec.status == EntityStatus::Destroyed) continue;
    const double rate = plan.inspection_rates.at(rec.kind);
    if (!rng.bernoulli(rate)) continue;
    InspectionEvent ev;
    ev.tick = span > 0 ? period_start + static_cast<Tick>(rng.bounded(
                             static_cast<std::uint64_t>(span)))
                       : period_start;
    ev.entity_id = rec.entity_id;
    ev.kind = rec.kind;
    ev.goal = inspection_goal(rec.kind);
    ev.outcome = "scheduled";
    events.push_back(std::move(ev));
  }
  std::sort(events.begin(), events.end(),
            [](const InspectionEvent& a, const InspectionEvent& b) {
              return std::tie(a.tick, a.entity_id) < std::tie(b.tick, b.entity_id);
            });
  return events;
}

Result<std::vector<FlaggedGap>> audit_power_log(const PowerLogRecord& log,
                                                Tick inspection_tick,
                                                Tick max_unexplained) {
  const auto& iv = log.on_intervals;
  for (std::size_t i = 0; i < iv.size(); ++i) {
    if (iv[i].end <= iv[i].start) {
      return Error{ErrorCode::MalformedLog,
                   "interval " + std::to_string(i) + " has no duration"};
    }
    if (i > 0 && iv[i].start < iv[i - 1].end) {
      return Error{ErrorCode::MalformedLog,
                   "interval " + std::to_string(i) + " overlaps its predecessor"};
    }
  }

  auto explained = [&](Tick start, Tick end) {
    return std::any_of(log.explanations.begin(), log.explanations.end(),
                       [&](const GapExplanation& ex) {
                         return ex.start <= start && ex.end >= end;
                       });
  };

  std::vector<FlaggedGap> flags;
  auto consider = [&](Tick start, Tick end) {
    if (start >= inspection_tick) return;
    end = std::min(end, inspection_tick);
    if (end - start > max_unexplained && !explained(start, end)) {
      flags.push_back(FlaggedGap{start, end});
    }
  };
  for (std::size_t i = 1; i < iv.size(); ++i) {
    consider(iv[i - 1].end, iv[i].start);
  }
  if (!iv.empty() && iv.back().end < inspection_tick) {
    consider(iv.back().end, inspection_tick);
  }
  return flags;
}

FlagResult flag_missing(std::vector<EntityRecord> registry,
                        const std::set<std::string>& responses) {
  FlagResult out;
  for (auto& rec : registry) {
    if (rec.kind != EntityKind::FlexHEGDevice ||
        rec.status == EntityStatus::Destroyed) {
      continue;
    }
    const bool answered = responses.count(rec.entity_id) > 0;
    if (!answered) {
      rec.status = EntityStatus::Missing;
      out.referred.push_back(rec.entity_id);
    } else if (rec.status == EntityStatus::Missing) {
      rec.status = EntityStatus::Present;
    }
  }
  out.registry = std::move(registry);
  return out;
}

jsonutil::Json registry_to_json(const std::vector<EntityRecord>& registry) {
  ju::Json arr = ju::Json::array();
  for (const auto& rec : registry) {
    ju::Json j;
    j["entity_id"] = rec.entity_id;
    j["kind"] = to_string(rec.kind);
    j["registered_owner"] = rec.registered_owner;
    j["registered_location"] = rec.registered_location;
    j["status"] = to_string(rec.status);
    arr.push_back(std::move(j));
  }
  return arr;
}

Result<std::vector<EntityRecord>> registry_from_json(const jsonutil::Json& j,
                                                     const std::string& path) {
  if (!j.is_array()) return ju::schema_error(path, "expected an array");
  std::vector<EntityRecord> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "/" + std::to_string(i);
    EntityRecord rec;
    auto id = ju::require_string(j[i], "entity_id", p);
    if (!id.ok()) return id.error();
    rec.entity_id = id.value();
    auto kind = ju::require_string(j[i], "kind", p);
    if (!kind.ok()) return kind.error();
    auto parsed_kind = entity_kind_from_string(kind.value());
    if (!parsed_kind) {
      return ju::schema_error(p + "/kind", "unknown kind '" + kind.value() + "'");
    }
    rec.kind = *parsed_kind;
    auto owner = ju::opt_string(j[i], "registered_owner", "", p);
    if (!owner.ok()) return owner.error();
    rec.registered_owner = owner.value();
    auto location = ju::opt_string(j[i], "registered_location", "", p);
    if (!location.ok()) return location.error();
    rec.registered_location = location.value();
    auto status = ju::opt_string(j[i], "status", "present", p);
    if (!status.ok()) return status.error();
    auto parsed_status = entity_status_from_string(status.value());
    if (!parsed_status) {
      return ju::schema_error(p + "/status",
                              "unknown status '" + status.value() + "'");
    }
    rec.status = *parsed_status;
    out.push_back(std::move(rec));
  }
  return out;
}

std::string inspection_csv(const std::vector<InspectionEvent>& events) {
  std::string out = "tick,entity_id,kind,goal,outcome\n";
  for (const auto& ev : events) {
    out += std::to_string(ev.tick);
    out += ',';
    out += csv_escape(ev.entity_id);
    out += ',';
    out += csv_escape(to_string(ev.kind));
    out += ',';
    out += csv_escape(ev.goal);
    out += ',';
    out += csv_escape(ev.outcome);
    out += '\n';
  }
  return out;
}

}  // namespace hegsim::oversight

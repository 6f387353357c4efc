#include "hegsim/scenario/report.hpp"

#include <filesystem>
#include <fstream>

#include "hegsim/core/csv.hpp"
#include "hegsim/core/digest.hpp"
#include "hegsim/oversight/registry.hpp"
#include "hegsim/protocol/json.hpp"

namespace hegsim::scenario {

using jsonutil::Json;

namespace {

Json body_json(const RunReport& r) {
  Json j;
  j["seed"] = r.seed;

  Json events = Json::array();
  for (const auto& e : r.events) {
    events.push_back(Json{{"tick", e.tick},
                          {"type", e.type},
                          {"target", e.target},
                          {"outcome", e.outcome}});
  }
  j["events"] = std::move(events);

  Json devices = Json::array();
  for (const auto& d : r.devices) {
    Json dj{{"device_id", d.device_id},
            {"serial", d.serial},
            {"version", d.version},
            {"mode", protocol::to_string(d.mode)},
            {"clock", d.clock},
            {"expiry", d.expiry}};
    if (d.license_expiry) dj["license_expiry"] = *d.license_expiry;
    devices.push_back(std::move(dj));
  }
  j["devices"] = std::move(devices);

  Json tally{{"allowed", r.workloads.allowed}, {"denied", r.workloads.denied}};
  Json reasons = Json::object();
  for (const auto& [reason, count] : r.workloads.deny_reasons) {
    reasons[reason] = count;
  }
  tally["deny_reasons"] = std::move(reasons);
  j["workloads"] = std::move(tally);

  Json conflicts = Json::array();
  for (const auto& c : r.conflicts) {
    conflicts.push_back(Json{{"approver", c.approver},
                             {"first", c.first_name},
                             {"second", c.second_name},
                             {"duplicate_serial", c.duplicate_serial},
                             {"window_overlap", c.window_overlap}});
  }
  j["conflicts"] = std::move(conflicts);

  Json inspections = Json::array();
  for (const auto& e : r.inspections) {
    inspections.push_back(Json{{"tick", e.tick},
                               {"entity_id", e.entity_id},
                               {"kind", oversight::to_string(e.kind)},
                               {"goal", e.goal},
                               {"outcome", e.outcome}});
  }
  j["inspections"] = std::move(inspections);

  Json gaps = Json::array();
  for (const auto& g : r.flagged_gaps) {
    gaps.push_back(
        Json{{"device_id", g.device_id}, {"start", g.start}, {"end", g.end}});
  }
  j["flagged_gaps"] = std::move(gaps);

  j["referrals"] = r.referrals;

  Json denials = Json::array();
  for (const auto& d : r.denials) denials.push_back(protocol::denial_to_json(d));
  j["denials"] = std::move(denials);

  j["registry"] = oversight::registry_to_json(r.registry);

  Json rows = Json::array();
  for (const auto& row : r.stability_rows) {
    rows.push_back(Json{{"u_w", row.u_w},
                        {"p_doom", row.p_doom},
                        {"p_w_given_d", row.p_w_given_d},
                        {"defector_payoff", row.defector},
                        {"stable", row.stable}});
  }
  j["stability"] = std::move(rows);

  if (r.oversight) {
    j["oversight"] = Json{{"population", r.oversight->population},
                          {"compromised", r.oversight->compromised},
                          {"sampling_rate", r.oversight->sampling_rate},
                          {"trials", r.oversight->trials},
                          {"analytic", r.oversight->analytic},
                          {"monte_carlo", r.oversight->monte_carlo}};
  }

  Json artifacts = Json::object();
  for (const auto& [name, art] : r.artifacts) artifacts[name] = art;
  j["artifacts"] = std::move(artifacts);
  return j;
}

Status write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return Error{ErrorCode::IoError, "cannot open " + path};
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) return Error{ErrorCode::IoError, "write failed for " + path};
  return Status{};
}

}  // namespace

std::string report_checksum(const RunReport& report) {
  const std::string dump = body_json(report).dump();
  return sha256_hex(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t*>(dump.data()), dump.size()));
}

Json report_to_json(const RunReport& report) {
  Json j = body_json(report);
  j["checksum"] = report_checksum(report);
  return j;
}

std::string events_csv(const std::vector<EventOutcome>& events) {
  std::string out = "tick,type,target,outcome\n";
  for (const auto& e : events) {
    out += std::to_string(e.tick) + "," + csv_escape(e.type) + "," +
           csv_escape(e.target) + "," + csv_escape(e.outcome) + "\n";
  }
  return out;
}

std::string devices_csv(const std::vector<DeviceReport>& devices) {
  std::string out = "device_id,serial,version,mode,clock,expiry,license_expiry\n";
  for (const auto& d : devices) {
    out += csv_escape(d.device_id) + "," + std::to_string(d.serial) + "," +
           std::to_string(d.version) + "," +
           csv_escape(protocol::to_string(d.mode)) + "," +
           std::to_string(d.clock) + "," + std::to_string(d.expiry) + ",";
    if (d.license_expiry) out += std::to_string(*d.license_expiry);
    out += "\n";
  }
  return out;
}

std::string conflicts_csv(const std::vector<ConflictReport>& conflicts) {
  std::string out = "approver,first,second,duplicate_serial,window_overlap\n";
  for (const auto& c : conflicts) {
    out += csv_escape(c.approver) + "," + csv_escape(c.first_name) + "," +
           csv_escape(c.second_name) + "," +
           (c.duplicate_serial ? "true" : "false") + "," +
           (c.window_overlap ? "true" : "false") + "\n";
  }
  return out;
}

Result<std::vector<std::string>> emit_report(const RunReport& report,
                                             const std::string& dir,
                                             const std::string& format) {
  const bool want_json = format == "json" || format == "both";
  const bool want_csv = format == "csv" || format == "both";
  if (!want_json && !want_csv) {
    return Error{ErrorCode::SchemaViolation,
                 "format must be json, csv or both, got '" + format + "'"};
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return Error{ErrorCode::IoError,
                 "cannot create " + dir + ": " + ec.message()};
  }

  std::vector<std::string> written;
  auto emit = [&](const std::string& name,
                  const std::string& content) -> Status {
    const std::string path = (std::filesystem::path(dir) / name).string();
    auto st = write_file(path, content);
    if (st.ok()) written.push_back(path);
    return st;
  };

  if (want_json) {
    auto st = emit("report.json", report_to_json(report).dump(2) + "\n");
    if (!st.ok()) return st.error();
  }
  if (want_csv) {
    struct {
      const char* name;
      std::string content;
    } files[] = {
        {"events.csv", events_csv(report.events)},
        {"devices.csv", devices_csv(report.devices)},
        {"inspections.csv", oversight::inspection_csv(report.inspections)},
        {"conflicts.csv", conflicts_csv(report.conflicts)},
        {"stability_sweep.csv", stability::sweep_csv(report.stability_rows)},
    };
    for (auto& f : files) {
      auto st = emit(f.name, f.content);
      if (!st.ok()) return st.error();
    }
  }
  return written;
}

}  // namespace hegsim::scenario

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "hegsim/repro/criteria.hpp"
#include "hegsim/scenario/config.hpp"
#include "hegsim/scenario/report.hpp"
#include "hegsim/scenario/run.hpp"

using namespace hegsim;
using namespace hegsim::scenario;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

ScenarioConfig parse_or_fail(const std::string& text) {
  auto parsed = parse_config(text);
  for (const auto& v : parsed.violations) {
    MESSAGE("violation: ", v.detail);
  }
  REQUIRE(parsed.ok());
  return *parsed.config;
}

constexpr const char* kMinimalConfig = R"json({
  "seed": 5,
  "policy": {
    "approvers": ["gov"],
    "update_rule": {"type": "all"},
    "extension_fraction": {"num": 1, "den": 1}
  },
  "devices": [
    {"device_id": "dut", "initial": {"serial": 1, "lifetime": 10,
      "ruleset": {"ruleset_id": "r", "grants": [
        {"workload_class": "training", "flop_limit": 1e15}]}}}
  ],
  "events": [
    {"tick": 0, "type": "propose_update", "name": "u", "version": 2,
     "lifetime": 10, "ruleset": {"ruleset_id": "r2", "grants": []}},
    {"tick": 1, "type": "advance_clock"},
    {"tick": 2, "type": "workload", "device": "dut",
     "workload": {"workload_class": "training", "total_flop": 1e10}}
  ]
})json";

}  // namespace

TEST_CASE("a minimal config parses into the expected shape") {
  const ScenarioConfig cfg = parse_or_fail(kMinimalConfig);
  CHECK(cfg.seed == 5);
  CHECK(cfg.policy.approvers == std::vector<std::string>{"gov"});
  REQUIRE(cfg.devices.size() == 1);
  CHECK(cfg.devices[0].device_id == "dut");
  CHECK(cfg.devices[0].serial == 1);
  CHECK(cfg.devices[0].version == 1);  // defaulted
  CHECK(cfg.devices[0].lifetime == 10);
  REQUIRE(cfg.events.size() == 3);
  CHECK(cfg.events[0].kind == EventKind::ProposeUpdate);
  CHECK(cfg.events[1].kind == EventKind::AdvanceClock);
  CHECK(cfg.events[2].kind == EventKind::Workload);
  REQUIRE(cfg.events[2].workload.has_value());
  CHECK(cfg.events[2].workload->total_flop == 1e10);
  CHECK_FALSE(cfg.stability.has_value());
  CHECK_FALSE(cfg.oversight.has_value());
}

TEST_CASE("an out-of-order tick names the offending event index") {
  const std::string text = R"json({
    "seed": 1,
    "policy": {"approvers": ["gov"], "update_rule": {"type": "all"},
               "extension_fraction": {"num": 1, "den": 1}},
    "events": [
      {"tick": 5, "type": "advance_clock"},
      {"tick": 3, "type": "advance_clock"}
    ]
  })json";
  auto parsed = parse_config(text);
  REQUIRE_FALSE(parsed.ok());
  REQUIRE(parsed.violations.size() == 1);
  CHECK(parsed.violations[0].code == ErrorCode::SchemaViolation);
  CHECK(parsed.violations[0].detail.find("/events/1/tick") != std::string::npos);
  CHECK(parsed.violations[0].detail.find("out of order") != std::string::npos);
}

TEST_CASE("independent schema problems are all reported in one pass") {
  const std::string text = R"json({
    "seed": 1,
    "policy": {"approvers": ["gov"], "update_rule": {"type": "all"},
               "extension_fraction": {"num": 1, "den": 1}},
    "devices": [{"device_id": "dut", "initial": {"serial": 0, "lifetime": 10,
      "ruleset": {"ruleset_id": "r", "grants": []}}}],
    "events": [
      {"tick": 0, "type": "no_such_event"},
      {"tick": 1, "type": "install", "device": "dut"}
    ]
  })json";
  auto parsed = parse_config(text);
  REQUIRE_FALSE(parsed.ok());
  CHECK(parsed.violations.size() >= 3);  // bad serial, unknown tag, missing name
  bool saw_unknown_tag = false;
  for (const auto& v : parsed.violations) {
    saw_unknown_tag |= v.code == ErrorCode::UnknownEventTag;
  }
  CHECK(saw_unknown_tag);
}

TEST_CASE("config round-trips through its JSON form") {
  const ScenarioConfig first = parse_or_fail(repro::demo_scenario_text());
  const std::string serialized = config_to_json(first).dump(2);
  const ScenarioConfig second = parse_or_fail(serialized);
  CHECK(config_to_json(first) == config_to_json(second));

  // The round trip preserves behavior, not just structure.
  CHECK(report_checksum(run_scenario(first)) ==
        report_checksum(run_scenario(second)));
}

TEST_CASE("the shipped demo scenario is the embedded one") {
  const std::string shipped =
      slurp(std::filesystem::path(HEGSIM_SOURCE_DIR) / "scenarios" /
            "demo.json");
  CHECK(shipped == repro::demo_scenario_text() + "\n");
}

TEST_CASE("expiry without a baseline locks down and denies") {
  const std::string text = R"json({
    "seed": 1,
    "policy": {"approvers": ["gov"], "update_rule": {"type": "all"},
               "extension_fraction": {"num": 1, "den": 1}},
    "devices": [{"device_id": "dut", "initial": {"serial": 1, "lifetime": 10,
      "ruleset": {"ruleset_id": "r", "grants": [
        {"workload_class": "training", "flop_limit": 1e15}]}}}],
    "events": [
      {"tick": 9, "type": "workload", "device": "dut",
       "workload": {"workload_class": "training", "total_flop": 1}},
      {"tick": 11, "type": "workload", "device": "dut",
       "workload": {"workload_class": "training", "total_flop": 1}}
    ]
  })json";
  const RunReport report = run_scenario(parse_or_fail(text));
  REQUIRE(report.events.size() == 2);
  CHECK(report.events[0].outcome == "allowed");
  CHECK(report.events[1].outcome == "denied: locked_down");
  REQUIRE(report.devices.size() == 1);
  CHECK(report.devices[0].mode == protocol::Mode::LockedDown);
  CHECK(report.workloads.allowed == 1);
  CHECK(report.workloads.denied == 1);
  CHECK(report.workloads.deny_reasons.at("locked_down") == 1);
}

TEST_CASE("expiry with a baseline falls back to the floor rules") {
  const std::string text = R"json({
    "seed": 1,
    "policy": {"approvers": ["gov"], "update_rule": {"type": "all"},
               "extension_fraction": {"num": 1, "den": 1},
               "baseline": {"ruleset_id": "floor", "grants": [
                 {"workload_class": "non_ai", "flop_limit": 1e9}]}},
    "devices": [{"device_id": "dut", "initial": {"serial": 1, "lifetime": 10,
      "ruleset": {"ruleset_id": "r", "grants": [
        {"workload_class": "training", "flop_limit": 1e15}]}}}],
    "events": [
      {"tick": 11, "type": "workload", "device": "dut",
       "workload": {"workload_class": "non_ai", "total_flop": 1e8}},
      {"tick": 12, "type": "workload", "device": "dut",
       "workload": {"workload_class": "training", "total_flop": 1}}
    ]
  })json";
  const RunReport report = run_scenario(parse_or_fail(text));
  CHECK(report.events[0].outcome == "allowed");
  CHECK(report.events[1].outcome == "denied: no_matching_grant");
  CHECK(report.devices[0].mode == protocol::Mode::BaselineFallback);
}

TEST_CASE("the demo run surfaces exactly one equivocation") {
  const RunReport report =
      run_scenario(parse_or_fail(repro::demo_scenario_text()));
  REQUIRE(report.conflicts.size() == 1);
  CHECK(report.conflicts[0].approver == "stateA");
  CHECK(report.conflicts[0].first_name == "u2");
  CHECK(report.conflicts[0].second_name == "e-secret");
  CHECK(report.conflicts[0].window_overlap);
  CHECK_FALSE(report.conflicts[0].duplicate_serial);
}

TEST_CASE("no event is silently dropped") {
  const ScenarioConfig cfg = parse_or_fail(repro::demo_scenario_text());
  const RunReport report = run_scenario(cfg);
  REQUIRE(report.events.size() == cfg.events.size());
  for (std::size_t i = 0; i < cfg.events.size(); ++i) {
    CHECK(report.events[i].tick == cfg.events[i].tick);
    CHECK(report.events[i].type == to_string(cfg.events[i].kind));
    CHECK_FALSE(report.events[i].outcome.empty());
  }
}

TEST_CASE("identical config and seed give identical reports") {
  const ScenarioConfig cfg = parse_or_fail(repro::demo_scenario_text());
  const RunReport r1 = run_scenario(cfg);
  const RunReport r2 = run_scenario(cfg);
  CHECK(report_checksum(r1) == report_checksum(r2));
  CHECK(report_to_json(r1).dump() == report_to_json(r2).dump());

  // A different seed moves only the Monte Carlo block, so the checksum
  // still changes.
  ScenarioConfig reseeded = cfg;
  reseeded.seed = cfg.seed + 1;
  const RunReport r3 = run_scenario(reseeded);
  CHECK(report_checksum(r3) != report_checksum(r1));
}

TEST_CASE("a missing device is denied licenses until it answers a round") {
  const std::string text = R"json({
    "seed": 1,
    "policy": {"approvers": ["gov"], "update_rule": {"type": "all"},
               "extension_fraction": {"num": 1, "den": 1}},
    "devices": [{"device_id": "dev-a", "initial": {"serial": 1, "lifetime": 100,
      "ruleset": {"ruleset_id": "r", "grants": []}}}],
    "license_authorities": ["auth"],
    "events": [
      {"tick": 1, "type": "inspection_round", "responders": []},
      {"tick": 2, "type": "license_issue", "issuer": "auth", "device": "dev-a", "duration": 10},
      {"tick": 3, "type": "inspection_round", "responders": ["dev-a"]},
      {"tick": 4, "type": "license_issue", "issuer": "auth", "device": "dev-a", "duration": 10}
    ]
  })json";
  const RunReport report = run_scenario(parse_or_fail(text));
  REQUIRE(report.events.size() == 4);
  CHECK(report.events[0].outcome == "ok missing=1 flagged=0");
  CHECK(report.events[1].outcome.find("RenewalDenied") == 0);
  CHECK(report.events[2].outcome == "ok missing=0 flagged=0");
  CHECK(report.events[3].outcome == "ok expiry=14");

  // The round that cleared the referral also cleared the standing denial.
  CHECK(report.denials.empty());
  CHECK(report.referrals == std::vector<std::string>{"dev-a"});
  REQUIRE(report.devices.size() == 1);
  REQUIRE(report.devices[0].license_expiry.has_value());
  CHECK(*report.devices[0].license_expiry == 14);
  REQUIRE(report.registry.size() == 1);
  CHECK(report.registry[0].status == oversight::EntityStatus::Present);
}

TEST_CASE("a manual denial outlives inspection rounds") {
  const std::string text = R"json({
    "seed": 1,
    "policy": {"approvers": ["gov"], "update_rule": {"type": "all"},
               "extension_fraction": {"num": 1, "den": 1}},
    "devices": [{"device_id": "dev-a", "initial": {"serial": 1, "lifetime": 100,
      "ruleset": {"ruleset_id": "r", "grants": []}}}],
    "license_authorities": ["auth"],
    "events": [
      {"tick": 1, "type": "license_deny", "issuer": "auth", "devices": ["dev-a"]},
      {"tick": 2, "type": "inspection_round", "responders": ["dev-a"]},
      {"tick": 3, "type": "license_issue", "issuer": "auth", "device": "dev-a", "duration": 10}
    ]
  })json";
  const RunReport report = run_scenario(parse_or_fail(text));
  CHECK(report.events[0].outcome == "ok devices=1");
  CHECK(report.events[2].outcome.find("RenewalDenied") == 0);
  REQUIRE(report.denials.size() == 1);
  CHECK(report.denials[0].device_ids == std::vector<std::string>{"dev-a"});
}

TEST_CASE("event failures are recorded outcomes, not aborts") {
  const std::string text = R"json({
    "seed": 1,
    "policy": {"approvers": ["gov"], "update_rule": {"type": "all"},
               "extension_fraction": {"num": 1, "den": 1}},
    "devices": [{"device_id": "dut", "initial": {"serial": 5, "lifetime": 100,
      "ruleset": {"ruleset_id": "r", "grants": []}}}],
    "events": [
      {"tick": 0, "type": "propose_update", "name": "old", "version": 1,
       "lifetime": 10, "ruleset": {"ruleset_id": "r-old", "grants": []}},
      {"tick": 0, "type": "sign", "name": "old"},
      {"tick": 1, "type": "install", "device": "dut", "name": "old"},
      {"tick": 2, "type": "install", "device": "dut", "name": "ghost"},
      {"tick": 3, "type": "workload", "device": "nobody",
       "workload": {"workload_class": "non_ai"}}
    ]
  })json";
  const RunReport report = run_scenario(parse_or_fail(text));
  REQUIRE(report.events.size() == 5);
  // Artifact serials start above every provisioned device serial, so the
  // install is a rollback only if the proposal machinery failed; here it
  // succeeds and the interesting failures are the two later ones.
  CHECK(report.events[2].outcome == "ok serial=6");
  CHECK(report.events[3].outcome.find("SchemaViolation") == 0);
  CHECK(report.events[4].outcome.find("UnknownDevice") == 0);
  CHECK(report.devices[0].serial == 6);
}

TEST_CASE("report emission writes the documented files") {
  const ScenarioConfig cfg = parse_or_fail(kMinimalConfig);
  const RunReport report = run_scenario(cfg);

  const auto dir =
      std::filesystem::temp_directory_path() / "hegsim-test-emit";
  std::error_code ec;
  std::filesystem::remove_all(dir, ec);

  auto written = emit_report(report, dir.string(), "both");
  REQUIRE(written.ok());
  std::set<std::string> names;
  for (const auto& path : written.value()) {
    names.insert(std::filesystem::path(path).filename().string());
    CHECK(std::filesystem::file_size(path) > 0);
  }
  CHECK(names.count("report.json") == 1);
  CHECK(names.count("events.csv") == 1);
  CHECK(names.count("devices.csv") == 1);

  auto json_only = emit_report(report, (dir / "j").string(), "json");
  REQUIRE(json_only.ok());
  CHECK(json_only.value().size() == 1);

  auto bad = emit_report(report, dir.string(), "yaml");
  REQUIRE_FALSE(bad.ok());
  CHECK(bad.error().code == ErrorCode::SchemaViolation);
}

TEST_CASE("the checksum covers every field") {
  RunReport a;
  a.seed = 1;
  RunReport b = a;
  CHECK(report_checksum(a) == report_checksum(b));
  b.workloads.allowed = 1;
  CHECK(report_checksum(a) != report_checksum(b));
  b = a;
  b.referrals.push_back("dev-x");
  CHECK(report_checksum(a) != report_checksum(b));
  b = a;
  b.seed = 2;
  CHECK(report_checksum(a) != report_checksum(b));
}

// Golden emission fixtures. Run the test binary with
// HEGSIM_RECORD_GOLDENS=1 to re-record after an intentional format change.
namespace {

void check_or_record_golden(const std::string& produced,
                            const std::string& fixture_name) {
  const auto fixture_path =
      std::filesystem::path(HEGSIM_FIXTURE_DIR) / fixture_name;
  if (std::getenv("HEGSIM_RECORD_GOLDENS") != nullptr) {
    std::ofstream out(fixture_path, std::ios::binary);
    REQUIRE(out.good());
    out << produced;
    MESSAGE("recorded ", fixture_name);
    return;
  }
  INFO("fixture: ", fixture_name);
  CHECK(produced == slurp(fixture_path));
}

std::string emitted_file(const RunReport& report, const std::string& format,
                         const std::string& filename) {
  const auto dir =
      std::filesystem::temp_directory_path() / "hegsim-test-golden";
  std::error_code ec;
  std::filesystem::remove_all(dir, ec);
  auto written = emit_report(report, dir.string(), format);
  REQUIRE(written.ok());
  for (const auto& path : written.value()) {
    if (std::filesystem::path(path).filename() == filename) {
      return slurp(path);
    }
  }
  FAIL("emit did not produce ", filename);
  return "";
}

}  // namespace

TEST_CASE("golden emission: empty report") {
  const RunReport empty;
  check_or_record_golden(emitted_file(empty, "json", "report.json"),
                         "golden_empty_report.json");
}

TEST_CASE("golden emission: single-device run") {
  const std::string text = R"json({
    "seed": 7,
    "policy": {"approvers": ["gov"], "update_rule": {"type": "all"},
               "extension_fraction": {"num": 1, "den": 1},
               "baseline": {"ruleset_id": "floor", "grants": [
                 {"workload_class": "non_ai", "flop_limit": 1e9}]}},
    "devices": [{"device_id": "solo", "initial": {"serial": 1, "lifetime": 20,
      "ruleset": {"ruleset_id": "factory", "grants": [
        {"workload_class": "training", "flop_limit": 1e15}]}}}],
    "events": [
      {"tick": 1, "type": "workload", "device": "solo",
       "workload": {"workload_class": "training", "total_flop": 1e14}},
      {"tick": 2, "type": "workload", "device": "solo",
       "workload": {"workload_class": "training", "total_flop": 1e16}},
      {"tick": 25, "type": "workload", "device": "solo",
       "workload": {"workload_class": "non_ai", "total_flop": 1e8}},
      {"tick": 26, "type": "attest", "device": "solo"}
    ]
  })json";
  const RunReport report = run_scenario(parse_or_fail(text));
  check_or_record_golden(emitted_file(report, "both", "report.json"),
                         "golden_single_device_report.json");
  check_or_record_golden(emitted_file(report, "both", "events.csv"),
                         "golden_single_device_events.csv");
  check_or_record_golden(emitted_file(report, "both", "devices.csv"),
                         "golden_single_device_devices.csv");
}

TEST_CASE("golden emission: stability sweep") {
  const std::string text = R"json({
    "seed": 3,
    "policy": {"approvers": ["gov"], "update_rule": {"type": "all"},
               "extension_fraction": {"num": 1, "den": 1}},
    "stability": {"u_w": [1.0, 1.5, 2.0], "p_doom": [0.0, 0.1],
                  "p_w_given_d": [0.5, 0.9]}
  })json";
  const RunReport report = run_scenario(parse_or_fail(text));
  CHECK(report.stability_rows.size() == 12);
  check_or_record_golden(emitted_file(report, "both", "stability_sweep.csv"),
                         "golden_stability_sweep.csv");
  check_or_record_golden(emitted_file(report, "both", "report.json"),
                         "golden_stability_report.json");
}

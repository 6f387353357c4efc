#include "hegsim/repro/criteria.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "hegsim/core/rng.hpp"
#include "hegsim/oversight/sampling.hpp"
#include "hegsim/protocol/approval.hpp"
#include "hegsim/protocol/encode.hpp"
#include "hegsim/protocol/signature.hpp"
#include "hegsim/repro/oracles.hpp"
#include "hegsim/repro/traces.hpp"
#include "hegsim/scenario/run.hpp"
#include "hegsim/stability/model.hpp"

namespace hegsim::repro {

namespace {

// Pinned gate tolerances. Changing any of these is a release decision.
constexpr double kThresholdTol = 1e-6;        // gates 1, 2
constexpr double kCompensationTol = 1e-4;     // gate 3
constexpr double kDetectionTol = 1e-5;        // gate 4, closed form
constexpr double kMonteCarloTol = 0.01;       // gate 4, simulation
constexpr std::size_t kMonteCarloTrials = 100000;
constexpr std::uint64_t kMonteCarloSeed = 20260819;
constexpr std::uint64_t kTraceSeed = 0x74726163657331ULL;
constexpr std::size_t kTraceCount = 10000;     // gate 6 floor
constexpr std::size_t kTraceMaxEvents = 100;
constexpr std::uint64_t kAdversarySeed = 0x616476736574ULL;
constexpr std::size_t kAdversarySets = 1000;   // gate 7 floor
constexpr std::size_t kAdversaryMaxArtifacts = 8;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

CriterionResult gate(int index, std::string name, bool passed,
                     std::string detail) {
  return CriterionResult{index, std::move(name), passed, std::move(detail)};
}

CriterionResult gate_threshold_1() {
  const auto t = stability::pwd_threshold(1.5, 0.1);
  const bool ok = !t.unconditional && std::abs(t.value - 0.740741) <= kThresholdTol;
  return gate(1, "pwd_threshold(1.5, 0.1)", ok,
              "got " + fmt(t.value) + ", want 0.740741 +/- " +
                  fmt(kThresholdTol));
}

CriterionResult gate_threshold_2() {
  const auto t = stability::pwd_threshold(1.5, 0.05);
  const bool ok = !t.unconditional && std::abs(t.value - 0.701754) <= kThresholdTol;
  return gate(2, "pwd_threshold(1.5, 0.05)", ok,
              "got " + fmt(t.value) + ", want 0.701754 +/- " +
                  fmt(kThresholdTol));
}

CriterionResult gate_compensation() {
  const double v = stability::min_stable_pdoom(2.0, 0.75);
  const bool ok = std::abs(v - 1.0 / 3.0) <= kCompensationTol;
  return gate(3, "min_stable_pdoom(2, 0.75)", ok,
              "got " + fmt(v) + ", want 1/3 +/- " + fmt(kCompensationTol));
}

CriterionResult gate_detection() {
  const double analytic = oversight::detection_probability(0.001, 1000);
  const bool formula_ok = std::abs(analytic - 0.63230) <= kDetectionTol;
  oversight::BatchScenario s;
  s.population = 1000;
  s.compromised = 1000;
  s.sampling_rate = 0.001;
  s.batches = {1000};
  const double mc =
      oversight::simulate_batch_smuggling(kMonteCarloSeed, s, kMonteCarloTrials);
  const bool mc_ok = std::abs(mc - analytic) <= kMonteCarloTol;
  return gate(4, "detection_probability(0.001, 1000) + monte carlo",
              formula_ok && mc_ok,
              "analytic " + fmt(analytic) + " (want 0.63230 +/- " +
                  fmt(kDetectionTol) + "), mc " + fmt(mc) + " at " +
                  std::to_string(kMonteCarloTrials) + " trials (+/- " +
                  fmt(kMonteCarloTol) + ")");
}

CriterionResult gate_boundary_grid() {
  // 40 x 25 = 1000 points; each strictly off the frontier must land on the
  // side the frontier predicts.
  constexpr double kPwd = 0.9;
  std::vector<double> u_w_grid;
  for (int i = 0; i < 40; ++i) u_w_grid.push_back(1.0 + (3.0 - 1.0) * i / 39.0);
  const auto curve = stability::boundary_curve(kPwd, u_w_grid);
  std::size_t checked = 0, skipped = 0, wrong = 0;
  std::string first;
  for (int i = 0; i < 40; ++i) {
    const double u_w = curve[i].first;
    const double b = curve[i].second;
    for (int j = 0; j < 25; ++j) {
      const double p_doom = 0.9 * j / 24.0;
      if (p_doom == b) {
        ++skipped;
        continue;
      }
      ++checked;
      const bool stable =
          stability::is_stable(stability::StabilityParams{1.0, u_w, p_doom, kPwd});
      const bool want = p_doom > b;
      if (stable != want) {
        ++wrong;
        if (first.empty()) {
          first = " first at u_w=" + fmt(u_w) + " p_doom=" + fmt(p_doom);
        }
      }
    }
  }
  return gate(5, "stability frontier splits a 1000-point grid", wrong == 0,
              std::to_string(checked) + " checked, " +
                  std::to_string(skipped) + " on the frontier, " +
                  std::to_string(wrong) + " misclassified" + first);
}

CriterionResult gate_traces() {
  const TraceSuiteResult r =
      run_trace_suite(kTraceSeed, kTraceCount, kTraceMaxEvents);
  std::string detail = std::to_string(r.traces) + " traces, " +
                       std::to_string(r.events) + " events, " +
                       std::to_string(r.violations) + " violations";
  if (!r.first_violation.empty()) detail += "; " + r.first_violation;
  return gate(6, "randomized protocol traces vs mini-model",
              r.violations == 0 && r.traces >= kTraceCount, detail);
}

CriterionResult gate_equivocation() {
  const HonestScanResult honest =
      scan_honest_traces(kTraceSeed, kTraceCount, kTraceMaxEvents);
  const AdversarialCompareResult adv = compare_adversarial_sets(
      kAdversarySeed, kAdversarySets, kAdversaryMaxArtifacts);
  std::string detail = "honest: " + std::to_string(honest.artifacts) +
                       " artifacts over " + std::to_string(honest.traces) +
                       " traces, " + std::to_string(honest.conflicts) +
                       " conflicts; adversarial: " +
                       std::to_string(adv.sets) + " sets, " +
                       std::to_string(adv.conflicts) + " agreed conflicts, " +
                       std::to_string(adv.mismatches) + " mismatches";
  if (!honest.detail.empty()) detail += "; " + honest.detail;
  if (!adv.detail.empty()) detail += "; " + adv.detail;
  return gate(7, "equivocation detector: honest clean, adversarial == oracle",
              honest.conflicts == 0 && adv.mismatches == 0 &&
                  adv.sets >= kAdversarySets,
              detail);
}

CriterionResult gate_veto() {
  protocol::ApproverPolicy policy;
  policy.approvers = {"p1", "p2", "p3"};
  policy.update_rule.kind = protocol::UpdateRule::Kind::AllApprovers;

  protocol::FirmwareUpdate u;
  u.serial = 7;
  u.version = 2;
  u.ruleset.ruleset_id = "veto-check";
  u.lifetime = 10;
  const Bytes payload = protocol::canonical_encode(u);

  std::size_t wrong = 0;
  for (unsigned mask = 0; mask < 8; ++mask) {
    protocol::FirmwareUpdate candidate = u;
    for (unsigned bit = 0; bit < 3; ++bit) {
      if (mask & (1u << bit)) {
        const std::string& id = policy.approvers[bit];
        candidate.signatures[id] = protocol::sign_payload(id, payload);
      }
    }
    const bool accepted =
        protocol::verify_update_approval(candidate, policy).accepted;
    if (accepted != (mask == 7u)) ++wrong;
  }
  return gate(8, "3-approver unanimity over all 8 subsets", wrong == 0,
              std::to_string(8 - wrong) + "/8 subsets classified correctly");
}

CriterionResult gate_assignment() {
  const auto [favorable, total] = enumerate_fixed_customer(10, 3, 2);
  const bool exact_ok = favorable * 12 == total && total == 252;
  const double p = static_cast<double>(favorable) / static_cast<double>(total);

  SplitMix64 rng(derive_seed(kMonteCarloSeed, 9));
  std::size_t hits = 0;
  for (std::size_t t = 0; t < kMonteCarloTrials; ++t) {
    const auto assignment = oversight::assign_randomly(rng, 10, 2);
    if (assignment[0] == 0 && assignment[1] == 0 && assignment[2] == 0) {
      ++hits;
    }
  }
  const double estimate =
      static_cast<double>(hits) / static_cast<double>(kMonteCarloTrials);
  const double band = three_sigma_band(p, kMonteCarloTrials);
  const bool mc_ok = std::abs(estimate - p) <= band;
  return gate(9, "balanced assignment: all 3 marked devices to one customer",
              exact_ok && mc_ok,
              "enumerated " + std::to_string(favorable) + "/" +
                  std::to_string(total) + " = " + fmt(p) + ", mc " +
                  fmt(estimate) + " (band +/- " + fmt(band) + ")");
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

CriterionResult gate_determinism() {
  auto parse = scenario::parse_config(demo_scenario_text());
  if (!parse.ok()) {
    std::string why = parse.violations.empty()
                          ? "no config"
                          : parse.violations.front().detail;
    return gate(10, "byte-identical reports for identical config", false,
                "built-in scenario failed to parse: " + why);
  }
  const auto dir = std::filesystem::temp_directory_path();
  const auto dir_a = dir / "hegsim-gate10-a";
  const auto dir_b = dir / "hegsim-gate10-b";
  std::error_code ec;
  std::filesystem::remove_all(dir_a, ec);
  std::filesystem::remove_all(dir_b, ec);

  const scenario::RunReport r1 = scenario::run_scenario(*parse.config);
  const scenario::RunReport r2 = scenario::run_scenario(*parse.config);
  auto w1 = scenario::emit_report(r1, dir_a.string(), "both");
  auto w2 = scenario::emit_report(r2, dir_b.string(), "both");
  if (!w1.ok() || !w2.ok()) {
    return gate(10, "byte-identical reports for identical config", false,
                "emit failed: " +
                    (!w1.ok() ? w1.error().detail : w2.error().detail));
  }
  if (w1.value().size() != w2.value().size()) {
    return gate(10, "byte-identical reports for identical config", false,
                "file count differs");
  }
  std::size_t files = 0, differing = 0;
  std::string first;
  for (std::size_t i = 0; i < w1.value().size(); ++i) {
    ++files;
    const std::string a = slurp(w1.value()[i]);
    const std::string b = slurp(w2.value()[i]);
    if (a != b || a.empty()) {
      ++differing;
      if (first.empty()) {
        first = std::filesystem::path(w1.value()[i]).filename().string();
      }
    }
  }
  const std::string checksum = scenario::report_checksum(r1);
  const bool ok = differing == 0 &&
                  checksum == scenario::report_checksum(r2);
  std::string detail = std::to_string(files) + " files compared, " +
                       std::to_string(differing) + " differ; checksum " +
                       checksum.substr(0, 12);
  if (!first.empty()) detail += "; first difference in " + first;
  return gate(10, "byte-identical reports for identical config", ok, detail);
}

}  // namespace

std::vector<CriterionResult> run_all_criteria() {
  std::vector<CriterionResult> out;
  out.push_back(gate_threshold_1());
  out.push_back(gate_threshold_2());
  out.push_back(gate_compensation());
  out.push_back(gate_detection());
  out.push_back(gate_boundary_grid());
  out.push_back(gate_traces());
  out.push_back(gate_equivocation());
  out.push_back(gate_veto());
  out.push_back(gate_assignment());
  out.push_back(gate_determinism());
  return out;
}

const std::string& demo_scenario_text() {
  static const std::string text = R"json({
  "seed": 2026,
  "policy": {
    "approvers": ["stateA", "stateB"],
    "update_rule": {"type": "all"},
    "extension_fraction": {"num": 1, "den": 2},
    "baseline": {
      "ruleset_id": "baseline-v1",
      "grants": [
        {"workload_class": "non_ai", "flop_limit": 1e12, "cluster_size_limit": 4, "bandwidth_limit": 1e9}
      ],
      "requires_license": false
    }
  },
  "devices": [
    {
      "device_id": "dev-a",
      "initial": {
        "serial": 1,
        "version": 1,
        "lifetime": 100,
        "ruleset": {
          "ruleset_id": "factory-a",
          "grants": [
            {"workload_class": "training", "flop_limit": 1e15, "cluster_size_limit": 64, "bandwidth_limit": 1e11},
            {"workload_class": "inference", "cluster_size_limit": 256}
          ],
          "requires_license": false
        }
      }
    },
    {
      "device_id": "dev-b",
      "initial": {
        "serial": 2,
        "version": 1,
        "lifetime": 40,
        "ruleset": {
          "ruleset_id": "factory-b",
          "grants": [
            {"workload_class": "inference", "flop_limit": 1e15}
          ],
          "requires_license": false
        }
      },
      "location": {"landmarks": ["lm-north", "lm-south"], "max_distance": 500}
    }
  ],
  "license_authorities": ["authority-1"],
  "registry": [
    {"entity_id": "fab-1", "kind": "fab_facility", "registered_owner": "consortium", "registered_location": "site 7"}
  ],
  "events": [
    {"tick": 0, "type": "propose_update", "name": "u1", "version": 2, "lifetime": 60,
     "ruleset": {"ruleset_id": "r-u1", "grants": [
       {"workload_class": "training", "flop_limit": 1e16, "cluster_size_limit": 128, "bandwidth_limit": 1e11}
     ], "requires_license": true}},
    {"tick": 0, "type": "sign", "name": "u1"},
    {"tick": 0, "type": "install", "device": "dev-a", "name": "u1"},
    {"tick": 1, "type": "workload", "device": "dev-a",
     "workload": {"workload_class": "training", "total_flop": 5e15, "cluster_size": 1}},
    {"tick": 1, "type": "license_issue", "issuer": "authority-1", "device": "dev-a", "duration": 80},
    {"tick": 2, "type": "workload", "device": "dev-a",
     "workload": {"workload_class": "training", "total_flop": 5e15, "cluster_size": 1}},
    {"tick": 2, "type": "workload", "device": "dev-a",
     "workload": {"workload_class": "training", "total_flop": 5e16, "cluster_size": 1}},
    {"tick": 2, "type": "workload", "device": "dev-a",
     "workload": {"workload_class": "training", "total_flop": 5e16, "cluster_size": 1, "authorized": true}},
    {"tick": 3, "type": "propose_extension", "name": "e1", "target": "u1", "new_expiry": 200},
    {"tick": 3, "type": "sign", "name": "e1", "signers": ["stateA"]},
    {"tick": 3, "type": "extend", "device": "dev-a", "name": "e1"},
    {"tick": 4, "type": "propose_update", "name": "u2", "version": 3, "lifetime": 50,
     "ruleset": {"ruleset_id": "r-u2", "grants": [
       {"workload_class": "training", "flop_limit": 1e15, "cluster_size_limit": 64, "bandwidth_limit": 1e11}
     ], "requires_license": false}},
    {"tick": 4, "type": "sign", "name": "u2"},
    {"tick": 4, "type": "propose_extension", "name": "e-secret", "target": "u1", "new_expiry": 240},
    {"tick": 4, "type": "sign", "name": "e-secret", "signers": ["stateA"], "bypass_transcript": true},
    {"tick": 5, "type": "install", "device": "dev-a", "name": "u2"},
    {"tick": 6, "type": "attest", "device": "dev-a"},
    {"tick": 41, "type": "workload", "device": "dev-b",
     "workload": {"workload_class": "inference", "total_flop": 1e12, "cluster_size": 1}},
    {"tick": 41, "type": "workload", "device": "dev-b",
     "workload": {"workload_class": "non_ai", "total_flop": 1e11, "cluster_size": 2}},
    {"tick": 42, "type": "tamper_inject", "device": "dev-a", "power_gap": {"from": 10, "to": 30}},
    {"tick": 42, "type": "tamper_inject", "device": "dev-b", "power_gap": {"from": 5, "to": 25},
     "explanation": "scheduled maintenance window"},
    {"tick": 45, "type": "inspection_round", "responders": ["dev-a"]},
    {"tick": 46, "type": "license_issue", "issuer": "authority-1", "device": "dev-b", "duration": 50},
    {"tick": 50, "type": "inspection_round", "responders": ["dev-a", "dev-b"]},
    {"tick": 51, "type": "license_issue", "issuer": "authority-1", "device": "dev-b", "duration": 50},
    {"tick": 60, "type": "inspection_round", "responders": ["dev-a", "dev-b"], "max_unexplained": 15},
    {"tick": 61, "type": "location_check", "device": "dev-b",
     "responses": [{"landmark": "lm-north", "distance": 400}]},
    {"tick": 62, "type": "location_check", "device": "dev-b",
     "responses": [{"landmark": "lm-north", "distance": 900}, {"landmark": "lm-unknown", "distance": 10}]},
    {"tick": 63, "type": "workload", "device": "dev-b",
     "workload": {"workload_class": "non_ai", "total_flop": 1e11, "cluster_size": 2}},
    {"tick": 63, "type": "attest", "device": "dev-b"},
    {"tick": 64, "type": "license_deny", "issuer": "authority-1", "devices": ["dev-a"]},
    {"tick": 65, "type": "license_issue", "issuer": "authority-1", "device": "dev-a", "duration": 10}
  ],
  "stability": {
    "u_w": [1.0, 1.5, 2.0],
    "p_doom": [0.0, 0.1, 0.3],
    "p_w_given_d": [0.5, 0.9]
  },
  "oversight": {
    "population": 50,
    "compromised": 5,
    "sampling_rate": 0.05,
    "customers": 1,
    "trials": 2000
  }
})json";
  return text;
}

}  // namespace hegsim::repro

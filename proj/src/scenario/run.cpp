#include "hegsim/scenario/run.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "hegsim/core/rng.hpp"
#include "hegsim/oversight/registry.hpp"
#include "hegsim/oversight/sampling.hpp"
#include "hegsim/protocol/device.hpp"
#include "hegsim/protocol/encode.hpp"
#include "hegsim/protocol/equivocation.hpp"
#include "hegsim/protocol/json.hpp"
#include "hegsim/protocol/licenses.hpp"
#include "hegsim/protocol/location.hpp"
#include "hegsim/protocol/attestation.hpp"
#include "hegsim/protocol/signature.hpp"
#include "hegsim/protocol/signer.hpp"
#include "hegsim/stability/model.hpp"

namespace hegsim::scenario {

namespace {

using protocol::DeviceState;
using protocol::ExtensionCertificate;
using protocol::FirmwareUpdate;
using protocol::SignerDevice;

// Monte Carlo stream id for the oversight block; keeps scripted events
// seed-independent so nothing else shifts when trials are re-drawn.
constexpr std::uint64_t kOversightStream = 1;

struct ArtifactState {
  bool is_update = true;
  FirmwareUpdate update;
  ExtensionCertificate ext;
  Tick declared_end = 0;  // latest tick some artifact declares it live to
};

std::string describe(const Error& e) {
  std::string out{to_string(e.code)};
  if (!e.detail.empty()) out += ": " + e.detail;
  return out;
}

struct Engine {
  const ScenarioConfig& config;
  RunReport report;

  std::map<std::string, DeviceState> devices;
  std::map<std::string, SignerDevice> signers;
  std::map<std::string, ArtifactState> artifacts;
  std::vector<std::string> artifact_order;
  std::vector<oversight::EntityRecord> registry;
  std::map<std::string, std::vector<oversight::GapExplanation>> explanations;

  std::vector<protocol::DenialRecord> manual_denials;
  std::optional<protocol::DenialRecord> auto_denial;

  std::uint64_t next_serial = 1;
  Tick window_frontier = 0;
  Tick now = 0;

  explicit Engine(const ScenarioConfig& cfg) : config(cfg) {
    report.seed = cfg.seed;
    for (const auto& spec : cfg.devices) {
      protocol::InstalledFirmware initial;
      initial.serial = spec.serial;
      initial.version = spec.version;
      initial.ruleset = spec.ruleset;
      initial.expiry = spec.lifetime;  // clocks start at tick 0
      DeviceState d = protocol::make_device(spec.device_id, initial,
                                            cfg.policy.baseline, spec.location);
      d = protocol::power_on(std::move(d), 0);
      devices.emplace(spec.device_id, std::move(d));
      next_serial = std::max(next_serial, spec.serial + 1);
      window_frontier = std::max(window_frontier, spec.lifetime);
      registry.push_back(oversight::EntityRecord{
          spec.device_id, oversight::EntityKind::FlexHEGDevice, "", "",
          oversight::EntityStatus::Present});
    }
    for (const auto& extra : cfg.registry) {
      if (!devices.count(extra.entity_id)) registry.push_back(extra);
    }
    for (const auto& id : cfg.policy.approvers) {
      signers.emplace(id, protocol::make_signer(id, next_serial));
    }
  }

  std::vector<protocol::DenialRecord> denial_ledger() const {
    auto ledger = manual_denials;
    if (auto_denial) ledger.push_back(*auto_denial);
    return ledger;
  }

  void advance_to(Tick t) {
    for (auto& [id, d] : devices) {
      if (t > d.clock) d = protocol::advance_clock(std::move(d), t - d.clock);
    }
    now = t;
  }

  DeviceState* find_device(const std::string& id) {
    auto it = devices.find(id);
    return it == devices.end() ? nullptr : &it->second;
  }

  oversight::EntityRecord* find_entity(const std::string& id) {
    for (auto& rec : registry) {
      if (rec.entity_id == id) return &rec;
    }
    return nullptr;
  }

  // Each handler returns the outcome string for the event log.

  std::string on_propose_update(const Event& ev) {
    if (artifacts.count(ev.name)) {
      return describe({ErrorCode::SchemaViolation,
                       "artifact '" + ev.name + "' already exists"});
    }
    ArtifactState art;
    art.is_update = true;
    art.update.serial = next_serial++;
    art.update.version = ev.version;
    art.update.ruleset = *ev.ruleset;
    art.update.lifetime = ev.lifetime;
    art.update.issued_at = ev.issued_at.value_or(window_frontier);
    art.declared_end = art.update.issued_at + art.update.lifetime;
    window_frontier = std::max(window_frontier, art.declared_end);
    std::string outcome = "ok serial=" + std::to_string(art.update.serial);
    artifacts.emplace(ev.name, std::move(art));
    artifact_order.push_back(ev.name);
    return outcome;
  }

  std::string on_propose_extension(const Event& ev) {
    if (artifacts.count(ev.name)) {
      return describe({ErrorCode::SchemaViolation,
                       "artifact '" + ev.name + "' already exists"});
    }
    auto target = artifacts.find(ev.target);
    if (target == artifacts.end()) {
      return describe({ErrorCode::SchemaViolation,
                       "unknown target artifact '" + ev.target + "'"});
    }
    ArtifactState art;
    art.is_update = false;
    art.ext.serial = next_serial++;
    art.ext.target_serial = target->second.is_update
                                ? target->second.update.serial
                                : target->second.ext.target_serial;
    art.ext.extends_expiry =
        ev.extends_expiry.value_or(target->second.declared_end);
    art.ext.new_expiry = *ev.new_expiry;
    if (art.ext.new_expiry <= art.ext.extends_expiry) {
      return describe(
          {ErrorCode::NonMonotoneExpiry,
           "new expiry " + std::to_string(art.ext.new_expiry) +
               " does not extend " + std::to_string(art.ext.extends_expiry)});
    }
    art.declared_end = art.ext.new_expiry;
    target->second.declared_end =
        std::max(target->second.declared_end, art.ext.new_expiry);
    window_frontier = std::max(window_frontier, art.ext.new_expiry);
    std::string outcome = "ok serial=" + std::to_string(art.ext.serial);
    artifacts.emplace(ev.name, std::move(art));
    artifact_order.push_back(ev.name);
    return outcome;
  }

  std::string on_sign(const Event& ev) {
    auto it = artifacts.find(ev.name);
    if (it == artifacts.end()) {
      return describe({ErrorCode::SchemaViolation,
                       "unknown artifact '" + ev.name + "'"});
    }
    ArtifactState& art = it->second;
    const std::vector<std::string>& who =
        ev.signers.empty() ? config.policy.approvers : ev.signers;
    const std::uint64_t serial =
        art.is_update ? art.update.serial : art.ext.serial;
    std::string first_error;
    std::size_t signed_count = 0;
    for (const auto& id : who) {
      if (ev.bypass_transcript) {
        // Compromised key: signature minted outside the transcript
        // discipline. The end-of-run scan is what catches this.
        const Bytes payload = art.is_update
                                  ? protocol::canonical_encode(art.update)
                                  : protocol::canonical_encode(art.ext);
        Bytes sig = protocol::sign_payload(id, payload);
        if (art.is_update) {
          art.update.signatures[id] = std::move(sig);
        } else {
          art.ext.signatures[id] = std::move(sig);
        }
        ++signed_count;
        continue;
      }
      auto signer_it = signers.find(id);
      if (signer_it == signers.end()) {
        signer_it = signers.emplace(id, protocol::make_signer(id)).first;
      }
      SignerDevice& signer = signer_it->second;
      // An approver that skipped earlier artifacts syncs the public stream
      // before signing; only the gap refusal is mediated here, never the
      // window or duplicate-serial checks.
      if (signer.next_serial < serial) signer.next_serial = serial;
      auto outcome =
          art.is_update ? protocol::approver_sign_update(signer, art.update)
                        : protocol::approver_sign_extension(signer, art.ext);
      if (!outcome.ok()) {
        if (first_error.empty()) {
          first_error = id + ": " + describe(outcome.error());
        }
        continue;
      }
      signer = outcome.value().signer;
      if (art.is_update) {
        art.update.signatures[id] = outcome.value().signature;
      } else {
        art.ext.signatures[id] = outcome.value().signature;
      }
      ++signed_count;
    }
    if (!first_error.empty()) {
      return first_error +
             " (signed=" + std::to_string(signed_count) + ")";
    }
    return "ok signed=" + std::to_string(signed_count);
  }

  std::string on_install(const Event& ev) {
    DeviceState* device = find_device(ev.device);
    if (!device) {
      return describe(
          {ErrorCode::UnknownDevice, "no device '" + ev.device + "'"});
    }
    auto it = artifacts.find(ev.name);
    if (it == artifacts.end() || !it->second.is_update) {
      return describe({ErrorCode::SchemaViolation,
                       "'" + ev.name + "' is not a signed update"});
    }
    auto next = protocol::install_update(*device, it->second.update,
                                         config.policy);
    if (!next.ok()) return describe(next.error());
    *device = next.value();
    return "ok serial=" + std::to_string(device->installed.serial);
  }

  std::string on_extend(const Event& ev) {
    DeviceState* device = find_device(ev.device);
    if (!device) {
      return describe(
          {ErrorCode::UnknownDevice, "no device '" + ev.device + "'"});
    }
    auto it = artifacts.find(ev.name);
    if (it == artifacts.end() || it->second.is_update) {
      return describe({ErrorCode::SchemaViolation,
                       "'" + ev.name + "' is not a signed extension"});
    }
    auto next =
        protocol::extend_lifetime(*device, it->second.ext, config.policy);
    if (!next.ok()) return describe(next.error());
    *device = next.value();
    return "ok expiry=" + std::to_string(device->installed.expiry);
  }

  std::string on_workload(const Event& ev) {
    DeviceState* device = find_device(ev.device);
    if (!device) {
      return describe(
          {ErrorCode::UnknownDevice, "no device '" + ev.device + "'"});
    }
    auto decision = protocol::evaluate_workload(*device, *ev.workload);
    if (decision.allowed) {
      ++report.workloads.allowed;
      return "allowed";
    }
    ++report.workloads.denied;
    const std::string reason = protocol::to_string(decision.reason);
    ++report.workloads.deny_reasons[reason];
    return "denied: " + reason;
  }

  std::string on_license_issue(const Event& ev) {
    DeviceState* device = find_device(ev.device);
    if (!device) {
      return describe(
          {ErrorCode::UnknownDevice, "no device '" + ev.device + "'"});
    }
    auto license = protocol::issue_license(ev.issuer,
                                           config.license_authorities,
                                           denial_ledger(), ev.device,
                                           ev.duration, now);
    if (!license.ok()) return describe(license.error());
    auto next = protocol::apply_license(*device, license.value());
    if (!next.ok()) return describe(next.error());
    *device = next.value();
    return "ok expiry=" + std::to_string(license.value().expiry);
  }

  std::string on_license_deny(const Event& ev) {
    if (std::find(config.license_authorities.begin(),
                  config.license_authorities.end(),
                  ev.issuer) == config.license_authorities.end()) {
      return describe({ErrorCode::UnauthorizedIssuer,
                       "'" + ev.issuer + "' is not a license authority"});
    }
    manual_denials.push_back(
        protocol::deny_renewal(ev.issuer, ev.devices, now));
    return "ok devices=" + std::to_string(ev.devices.size());
  }

  std::string on_location_check(const Event& ev) {
    DeviceState* device = find_device(ev.device);
    if (!device) {
      return describe(
          {ErrorCode::UnknownDevice, "no device '" + ev.device + "'"});
    }
    std::vector<protocol::LandmarkResponse> responses;
    for (const auto& [landmark, distance] : ev.responses) {
      responses.push_back(
          protocol::sign_landmark_response(landmark, ev.device, distance));
    }
    const bool passed = protocol::verify_location(*device, responses);
    *device = protocol::enforce_location(std::move(*device), responses);
    return passed ? "ok" : "failed: locked down";
  }

  std::string on_inspection_round(const Event& ev) {
    const std::set<std::string> responders(ev.responders.begin(),
                                           ev.responders.end());
    auto flagged = oversight::flag_missing(registry, responders);
    registry = std::move(flagged.registry);

    for (const auto& rec : registry) {
      if (rec.kind != oversight::EntityKind::FlexHEGDevice) continue;
      if (rec.status == oversight::EntityStatus::Destroyed) continue;
      report.inspections.push_back(oversight::InspectionEvent{
          now, rec.entity_id, rec.kind, oversight::inspection_goal(rec.kind),
          responders.count(rec.entity_id) ? "responded" : "missing"});
    }

    for (const auto& id : flagged.referred) report.referrals.push_back(id);
    if (!flagged.referred.empty() && !config.license_authorities.empty()) {
      auto_denial = protocol::deny_renewal(config.license_authorities.front(),
                                           flagged.referred, now);
    } else if (flagged.referred.empty()) {
      auto_denial.reset();  // every device answered; nothing stays denied
    }

    std::size_t flagged_devices = 0;
    std::string audit_error;
    if (ev.max_unexplained) {
      for (auto& [id, device] : devices) {
        oversight::PowerLogRecord log;
        log.on_intervals = device.power_log;
        if (device.powered_on_since && *device.powered_on_since < now) {
          log.on_intervals.push_back(PowerInterval{*device.powered_on_since,
                                                   now});
        }
        auto exp = explanations.find(id);
        if (exp != explanations.end()) log.explanations = exp->second;
        auto audit = oversight::audit_power_log(log, now, *ev.max_unexplained);
        if (!audit.ok()) {
          if (audit_error.empty()) {
            audit_error = id + ": " + describe(audit.error());
          }
          continue;
        }
        for (const auto& gap : audit.value()) {
          report.flagged_gaps.push_back(GapReport{id, gap.start, gap.end});
        }
        const bool dirty = !audit.value().empty();
        if (dirty) {
          ++flagged_devices;
          if (auto* rec = find_entity(id);
              rec && rec->status == oversight::EntityStatus::Present) {
            rec->status = oversight::EntityStatus::TamperSuspected;
          }
        }
        report.inspections.push_back(oversight::InspectionEvent{
            now, id, oversight::EntityKind::FlexHEGDevice,
            oversight::inspection_goal(oversight::EntityKind::FlexHEGDevice),
            dirty ? "power_log_flagged" : "power_log_clean"});
      }
    }
    if (!audit_error.empty()) return audit_error;
    return "ok missing=" + std::to_string(flagged.referred.size()) +
           " flagged=" + std::to_string(flagged_devices);
  }

  std::string on_tamper_inject(const Event& ev) {
    if (ev.power_gap) {
      DeviceState* device = find_device(ev.device);
      if (!device) {
        return describe(
            {ErrorCode::UnknownDevice, "no device '" + ev.device + "'"});
      }
      *device = protocol::power_off(std::move(*device), ev.power_gap->start);
      *device = protocol::power_on(std::move(*device), ev.power_gap->end);
      if (!ev.explanation.empty()) {
        explanations[ev.device].push_back(oversight::GapExplanation{
            ev.power_gap->start, ev.power_gap->end, ev.explanation});
      }
    }
    if (!ev.status.empty()) {
      auto* rec = find_entity(ev.entity);
      if (!rec) {
        return describe({ErrorCode::UnknownDevice,
                         "no registry entity '" + ev.entity + "'"});
      }
      rec->status = *oversight::entity_status_from_string(ev.status);
    }
    return "ok";
  }

  std::string on_attest(const Event& ev) {
    DeviceState* device = find_device(ev.device);
    if (!device) {
      return describe(
          {ErrorCode::UnknownDevice, "no device '" + ev.device + "'"});
    }
    std::set<std::string> known;
    for (const auto& [id, d] : devices) known.insert(id);
    auto att = protocol::produce_attestation(*device);
    auto verdict = protocol::verify_attestation(att, known);
    if (!verdict.ok()) return describe(verdict.error());
    return std::string("ok verified=") +
           (verdict.value() ? "true" : "false") +
           " serial=" + std::to_string(att.serial) + " mode=" +
           protocol::to_string(att.mode);
  }

  std::string dispatch(const Event& ev) {
    switch (ev.kind) {
      case EventKind::ProposeUpdate: return on_propose_update(ev);
      case EventKind::ProposeExtension: return on_propose_extension(ev);
      case EventKind::Sign: return on_sign(ev);
      case EventKind::Install: return on_install(ev);
      case EventKind::Extend: return on_extend(ev);
      case EventKind::AdvanceClock: return "ok";
      case EventKind::Workload: return on_workload(ev);
      case EventKind::LicenseIssue: return on_license_issue(ev);
      case EventKind::LicenseDeny: return on_license_deny(ev);
      case EventKind::LocationCheck: return on_location_check(ev);
      case EventKind::InspectionRound: return on_inspection_round(ev);
      case EventKind::TamperInject: return on_tamper_inject(ev);
      case EventKind::Attest: return on_attest(ev);
    }
    return describe({ErrorCode::UnknownEventTag, "unhandled event kind"});
  }

  static std::string target_of(const Event& ev) {
    switch (ev.kind) {
      case EventKind::ProposeUpdate:
      case EventKind::ProposeExtension:
      case EventKind::Sign:
        return ev.name;
      case EventKind::Install:
      case EventKind::Extend:
        return ev.device + "/" + ev.name;
      case EventKind::Workload:
      case EventKind::LicenseIssue:
      case EventKind::LocationCheck:
      case EventKind::Attest:
        return ev.device;
      case EventKind::LicenseDeny: {
        std::string out;
        for (const auto& id : ev.devices) {
          if (!out.empty()) out += ";";
          out += id;
        }
        return out;
      }
      case EventKind::TamperInject:
        return ev.device.empty() ? ev.entity : ev.device;
      case EventKind::AdvanceClock:
      case EventKind::InspectionRound:
        return "";
    }
    return "";
  }

  void finish() {
    // Devices, sorted by id via the map.
    for (const auto& [id, d] : devices) {
      DeviceReport dr;
      dr.device_id = id;
      dr.serial = d.installed.serial;
      dr.version = d.installed.version;
      dr.mode = d.mode;
      dr.clock = d.clock;
      dr.expiry = d.installed.expiry;
      if (d.license) dr.license_expiry = d.license->expiry;
      report.devices.push_back(std::move(dr));
    }

    // End-of-run equivocation scan over everything anyone signed.
    std::vector<protocol::SignedArtifact> scan;
    std::vector<std::string> scan_names;
    for (const auto& name : artifact_order) {
      const ArtifactState& art = artifacts.at(name);
      if (art.is_update) {
        if (art.update.signatures.empty()) continue;
        scan.push_back(art.update);
      } else {
        if (art.ext.signatures.empty()) continue;
        scan.push_back(art.ext);
      }
      scan_names.push_back(name);
    }
    for (const auto& c : protocol::detect_equivocation(scan)) {
      report.conflicts.push_back(ConflictReport{c.approver,
                                                scan_names[c.first],
                                                scan_names[c.second],
                                                c.duplicate_serial,
                                                c.window_overlap});
    }

    report.denials = denial_ledger();
    report.registry = registry;

    for (const auto& name : artifact_order) {
      const ArtifactState& art = artifacts.at(name);
      report.artifacts[name] = art.is_update
                                   ? protocol::update_to_json(art.update)
                                   : protocol::extension_to_json(art.ext);
    }

    if (config.stability) {
      report.stability_rows =
          stability::sweep(config.stability->u_w, config.stability->p_doom,
                           config.stability->p_w_given_d);
    }

    if (config.oversight) {
      const auto& spec = *config.oversight;
      OversightReport ov;
      ov.population = spec.batch.population;
      ov.compromised = spec.batch.compromised;
      ov.sampling_rate = spec.batch.sampling_rate;
      ov.trials = spec.trials;
      ov.analytic = oversight::detection_probability(
          spec.batch.sampling_rate,
          static_cast<std::uint64_t>(spec.batch.compromised));
      ov.monte_carlo = oversight::simulate_batch_smuggling(
          derive_seed(config.seed, kOversightStream), spec.batch, spec.trials);
      report.oversight = ov;
    }
  }
};

}  // namespace

RunReport run_scenario(const ScenarioConfig& config) {
  Engine engine(config);
  for (const auto& ev : config.events) {
    engine.advance_to(ev.tick);
    std::string outcome = engine.dispatch(ev);
    engine.report.events.push_back(EventOutcome{
        ev.tick, to_string(ev.kind), Engine::target_of(ev),
        std::move(outcome)});
  }
  engine.finish();
  return engine.report;
}

}  // namespace hegsim::scenario

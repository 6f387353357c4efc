#include "hegsim/protocol/device.hpp"

#include <algorithm>

#include "hegsim/protocol/approval.hpp"
#include "hegsim/protocol/encode.hpp"
#include "hegsim/protocol/ratchet.hpp"

namespace hegsim::protocol {

namespace {

bool class_fits(const WorkloadDescriptor& w, const CapabilityGrant& g) {
  return w.workload_class == g.workload_class ||
         w.workload_class == WorkloadClass::NonAI;
}

// First limit the workload violates, in the fixed reporting order.
DenyReason first_violation(const WorkloadDescriptor& w, const CapabilityGrant& g,
                           bool authorization_escape) {
  const bool flop_ok =
      w.total_flop <= g.flop_limit ||
      (authorization_escape && w.workload_class == WorkloadClass::Training &&
       w.authorized);
  if (!flop_ok) return DenyReason::FlopLimitExceeded;
  if (w.cluster_size > g.cluster_size_limit) return DenyReason::ClusterTooLarge;
  if (w.bandwidth > g.bandwidth_limit) return DenyReason::BandwidthTooHigh;
  return DenyReason::None;
}

WorkloadDecision decide_against_grants(const WorkloadDescriptor& w,
                                       const std::vector<CapabilityGrant>& grants,
                                       bool authorization_escape) {
  const CapabilityGrant* first_class_match = nullptr;
  for (const auto& g : grants) {
    if (!class_fits(w, g)) continue;
    if (first_class_match == nullptr) first_class_match = &g;
    if (first_violation(w, g, authorization_escape) == DenyReason::None) {
      return WorkloadDecision{true, DenyReason::None};
    }
  }
  if (first_class_match == nullptr) {
    return WorkloadDecision{false, DenyReason::NoMatchingGrant};
  }
  return WorkloadDecision{
      false, first_violation(w, *first_class_match, authorization_escape)};
}

bool license_valid(const DeviceState& device) {
  return device.license.has_value() &&
         device.license->device_id == device.device_id &&
         device.license->expiry > device.clock;
}

}  // namespace

DeviceState make_device(std::string device_id, InstalledFirmware initial,
                        std::optional<Ruleset> baseline,
                        std::optional<LocationConfig> location) {
  DeviceState d;
  d.device_id = std::move(device_id);
  d.rollback_floor = initial.serial;
  d.installed = std::move(initial);
  d.baseline = std::move(baseline);
  d.location_config = std::move(location);
  return d;
}

Result<DeviceState> install_update(DeviceState device,
                                   const FirmwareUpdate& update,
                                   const ApproverPolicy& policy) {
  if (device.mode == Mode::LockedDown) {
    return Error{ErrorCode::DeviceLockedDown, device.device_id};
  }
  const ApprovalResult approval = verify_update_approval(update, policy);
  if (!approval.accepted) {
    std::string detail = approval.missing.empty()
                             ? "short " + std::to_string(approval.shortfall)
                             : "missing " + approval.missing;
    return Error{ErrorCode::ApprovalInvalid, std::move(detail)};
  }
  if (update.serial <= device.rollback_floor) {
    return Error{ErrorCode::RollbackRejected,
                 "serial " + std::to_string(update.serial) + " not above floor " +
                     std::to_string(device.rollback_floor)};
  }
  if (policy.ratchet_mode &&
      !check_ratchet(device.installed.ruleset, update.ruleset)) {
    return Error{ErrorCode::RatchetViolation, update.ruleset.ruleset_id};
  }
  Ruleset effective = update.ruleset;
  for (const auto& g : device.installed.ruleset.grants) {
    if (g.irrevocable &&
        std::find(effective.grants.begin(), effective.grants.end(), g) ==
            effective.grants.end()) {
      effective.grants.push_back(g);
    }
  }
  device.installed.serial = update.serial;
  device.installed.version = update.version;
  device.installed.ruleset = std::move(effective);
  device.installed.expiry = device.clock + update.lifetime;
  device.rollback_floor = update.serial;
  device.mode = Mode::Active;
  return device;
}

DeviceState advance_clock(DeviceState device, Tick dt) {
  if (dt > 0) device.clock += dt;
  if (device.mode == Mode::Active && device.clock >= device.installed.expiry) {
    device.mode = device.baseline.has_value() ? Mode::BaselineFallback
                                              : Mode::LockedDown;
  }
  return device;
}

Result<DeviceState> extend_lifetime(DeviceState device,
                                    const ExtensionCertificate& ext,
                                    const ApproverPolicy& policy) {
  if (device.mode == Mode::LockedDown) {
    return Error{ErrorCode::DeviceLockedDown, device.device_id};
  }
  if (device.mode != Mode::Active) {
    return Error{ErrorCode::AlreadyExpired,
                 "device fell back before the extension arrived"};
  }
  if (ext.target_serial != device.installed.serial) {
    return Error{ErrorCode::WrongTarget,
                 "targets serial " + std::to_string(ext.target_serial) +
                     ", installed " + std::to_string(device.installed.serial)};
  }
  if (ext.new_expiry <= device.installed.expiry) {
    return Error{ErrorCode::NonMonotoneExpiry,
                 "new expiry " + std::to_string(ext.new_expiry) +
                     " not after " + std::to_string(device.installed.expiry)};
  }
  const std::size_t required =
      policy.extension_fraction.required_count(policy.approvers.size());
  const std::size_t have = count_valid_signatures(
      ext.signatures, policy, canonical_encode(ext));
  if (have < required) {
    return Error{ErrorCode::InsufficientSignatures,
                 std::to_string(have) + " of " + std::to_string(required) +
                     " required"};
  }
  device.installed.expiry = ext.new_expiry;
  return device;
}

WorkloadDecision evaluate_workload(const DeviceState& device,
                                   const WorkloadDescriptor& w) {
  switch (device.mode) {
    case Mode::LockedDown:
      return WorkloadDecision{false, DenyReason::LockedDown};
    case Mode::BaselineFallback: {
      if (!device.baseline.has_value()) {
        return WorkloadDecision{false, DenyReason::NoMatchingGrant};
      }
      return decide_against_grants(w, device.baseline->grants,
                                   /*authorization_escape=*/false);
    }
    case Mode::Active: {
      if (device.installed.ruleset.requires_license && !license_valid(device)) {
        return WorkloadDecision{false, DenyReason::LicenseMissingOrExpired};
      }
      return decide_against_grants(w, device.installed.ruleset.grants,
                                   /*authorization_escape=*/true);
    }
  }
  return WorkloadDecision{false, DenyReason::NoMatchingGrant};
}

DeviceState power_on(DeviceState device, Tick at) {
  if (!device.powered_on_since.has_value()) device.powered_on_since = at;
  return device;
}

DeviceState power_off(DeviceState device, Tick at) {
  if (device.powered_on_since.has_value()) {
    if (at > *device.powered_on_since) {
      device.power_log.push_back(PowerInterval{*device.powered_on_since, at});
    }
    device.powered_on_since.reset();
  }
  return device;
}

}  // namespace hegsim::protocol

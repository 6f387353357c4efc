#pragma once

#include "hegsim/core/result.hpp"
#include "hegsim/protocol/types.hpp"

namespace hegsim::protocol {

/// Provisions a device with its factory firmware. The baseline ruleset is
/// burned in at provisioning time: expiry then degrades the device to
/// BaselineFallback instead of LockedDown.
DeviceState make_device(std::string device_id, InstalledFirmware initial,
                        std::optional<Ruleset> baseline = std::nullopt,
                        std::optional<LocationConfig> location = std::nullopt);

/// Installs an approved update. Refusal order is fixed and tested:
/// DeviceLockedDown, ApprovalInvalid, RollbackRejected, then
/// RatchetViolation (only when the policy runs in ratchet mode). On
/// success the device is Active with expiry = clock + lifetime,
/// rollback_floor = serial, and every irrevocable grant of the previous
/// effective ruleset carried into the new grant set.
Result<DeviceState> install_update(DeviceState device,
                                   const FirmwareUpdate& update,
                                   const ApproverPolicy& policy);

/// Moves the device clock forward. Crossing the expiry while Active drops
/// the device to BaselineFallback when a baseline is provisioned, else
/// LockedDown. LockedDown is absorbing. Negative dt is treated as zero.
DeviceState advance_clock(DeviceState device, Tick dt);

/// Applies a lifetime extension to the installed update. Must arrive while
/// the device is still Active; a lapsed device needs a fresh full update.
/// Refusal order: DeviceLockedDown, AlreadyExpired, WrongTarget,
/// NonMonotoneExpiry, InsufficientSignatures.
Result<DeviceState> extend_lifetime(DeviceState device,
                                    const ExtensionCertificate& ext,
                                    const ApproverPolicy& policy);

/// Decides one workload under the current mode. Active mode consults the
/// installed grants plus the license gate; BaselineFallback consults only
/// the baseline grants with no authorization escape; LockedDown denies
/// everything. A NonAI workload fits a grant of any class; other classes
/// must match the grant class exactly.
WorkloadDecision evaluate_workload(const DeviceState& device,
                                   const WorkloadDescriptor& w);

/// Power bookkeeping for oversight audits: on/off pairs accumulate as
/// half-open intervals in device.power_log.
DeviceState power_on(DeviceState device, Tick at);
DeviceState power_off(DeviceState device, Tick at);

}  // namespace hegsim::protocol

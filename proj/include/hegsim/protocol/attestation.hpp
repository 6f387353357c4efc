#pragma once

#include <set>
#include <string>

#include "hegsim/core/result.hpp"
#include "hegsim/protocol/types.hpp"

namespace hegsim::protocol {

/// Snapshot of the device's current firmware identity, clock, and mode,
/// signed under the device key. A locked-down device attests its lockdown.
Attestation produce_attestation(const DeviceState& device);

/// Checks the attestation against a registry of known device ids (the
/// simulation's stand-in for a key directory). Returns the signature
/// verdict, or UnknownDevice for an unregistered device.
Result<bool> verify_attestation(const Attestation& att,
                                const std::set<std::string>& known_devices);

}  // namespace hegsim::protocol

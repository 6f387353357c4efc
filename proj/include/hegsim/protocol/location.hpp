#pragma once

#include <vector>

#include "hegsim/protocol/types.hpp"

namespace hegsim::protocol {

/// A landmark's signed distance report for one device. Distances are taken
/// at face value in the simulation; the signature binds landmark, device,
/// and distance together.
LandmarkResponse sign_landmark_response(const std::string& landmark_id,
                                        const std::string& device_id,
                                        double distance);

/// True when at least one response is validly signed by a landmark in the
/// device's location config, names this device, and reports a distance
/// within max_distance. Devices without a location config pass vacuously.
bool verify_location(const DeviceState& device,
                     const std::vector<LandmarkResponse>& responses);

/// Runs the check and locks the device down on failure. No-op for devices
/// without location enforcement configured.
DeviceState enforce_location(DeviceState device,
                             const std::vector<LandmarkResponse>& responses);

}  // namespace hegsim::protocol

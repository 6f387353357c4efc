#include "hegsim/protocol/location.hpp"

#include <algorithm>

#include "hegsim/protocol/encode.hpp"
#include "hegsim/protocol/signature.hpp"

namespace hegsim::protocol {

LandmarkResponse sign_landmark_response(const std::string& landmark_id,
                                        const std::string& device_id,
                                        double distance) {
  LandmarkResponse r;
  r.landmark_id = landmark_id;
  r.device_id = device_id;
  r.distance = distance;
  r.signature = sign_payload(landmark_id, canonical_encode(r));
  return r;
}

bool verify_location(const DeviceState& device,
                     const std::vector<LandmarkResponse>& responses) {
  if (!device.location_config.has_value()) return true;
  const LocationConfig& cfg = *device.location_config;
  return std::any_of(
      responses.begin(), responses.end(), [&](const LandmarkResponse& r) {
        if (r.device_id != device.device_id) return false;
        if (r.distance > cfg.max_distance) return false;
        if (std::find(cfg.landmarks.begin(), cfg.landmarks.end(),
                      r.landmark_id) == cfg.landmarks.end()) {
          return false;
        }
        return verify_payload(r.landmark_id, canonical_encode(r), r.signature);
      });
}

DeviceState enforce_location(DeviceState device,
                             const std::vector<LandmarkResponse>& responses) {
  if (!device.location_config.has_value()) return device;
  if (!verify_location(device, responses)) device.mode = Mode::LockedDown;
  return device;
}

}  // namespace hegsim::protocol

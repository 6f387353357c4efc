#include "hegsim/protocol/attestation.hpp"

#include "hegsim/protocol/encode.hpp"
#include "hegsim/protocol/signature.hpp"

namespace hegsim::protocol {

Attestation produce_attestation(const DeviceState& device) {
  Attestation att;
  att.device_id = device.device_id;
  att.serial = device.installed.serial;
  att.version = device.installed.version;
  att.clock = device.clock;
  att.mode = device.mode;
  att.signature = sign_payload(device.device_id, canonical_encode(att));
  return att;
}

Result<bool> verify_attestation(const Attestation& att,
                                const std::set<std::string>& known_devices) {
  if (known_devices.find(att.device_id) == known_devices.end()) {
    return Error{ErrorCode::UnknownDevice, att.device_id};
  }
  return verify_payload(att.device_id, canonical_encode(att), att.signature);
}

}  // namespace hegsim::protocol

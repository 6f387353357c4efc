#include "hegsim/protocol/encode.hpp"

#include <algorithm>

namespace hegsim::protocol {

namespace {

// Leading byte of every canonical encoding, making the scheme injective
// across artifact types.
constexpr std::uint8_t kTagUpdate = 0x01;
constexpr std::uint8_t kTagExtension = 0x02;
constexpr std::uint8_t kTagLicense = 0x03;
constexpr std::uint8_t kTagAttestation = 0x04;
constexpr std::uint8_t kTagLandmark = 0x05;
constexpr std::uint8_t kTagDenial = 0x06;

void put_ruleset(Encoder& e, const Ruleset& r) {
  e.put_string(r.ruleset_id);
  std::vector<Bytes> encoded;
  encoded.reserve(r.grants.size());
  for (const auto& g : r.grants) encoded.push_back(encode_grant(g));
  std::sort(encoded.begin(), encoded.end());
  e.put_count(encoded.size());
  for (const auto& b : encoded) {
    for (std::uint8_t byte : b) e.put_u8(byte);
  }
  e.put_bool(r.requires_license);
}

}  // namespace

Bytes encode_grant(const CapabilityGrant& g) {
  Encoder e;
  e.put_u8(static_cast<std::uint8_t>(g.workload_class));
  e.put_f64(g.flop_limit);
  e.put_f64(g.cluster_size_limit);
  e.put_f64(g.bandwidth_limit);
  e.put_bool(g.irrevocable);
  return e.take();
}

Bytes canonical_encode(const FirmwareUpdate& u) {
  Encoder e;
  e.put_u8(kTagUpdate);
  e.put_u64(u.serial);
  e.put_u64(u.version);
  put_ruleset(e, u.ruleset);
  e.put_i64(u.lifetime);
  e.put_i64(u.issued_at);
  return e.take();
}

Bytes canonical_encode(const ExtensionCertificate& c) {
  Encoder e;
  e.put_u8(kTagExtension);
  e.put_u64(c.serial);
  e.put_u64(c.target_serial);
  e.put_i64(c.extends_expiry);
  e.put_i64(c.new_expiry);
  return e.take();
}

Bytes canonical_encode(const OperatingLicense& l) {
  Encoder e;
  e.put_u8(kTagLicense);
  e.put_string(l.device_id);
  e.put_i64(l.expiry);
  e.put_string(l.issuer);
  return e.take();
}

Bytes canonical_encode(const Attestation& a) {
  Encoder e;
  e.put_u8(kTagAttestation);
  e.put_string(a.device_id);
  e.put_u64(a.serial);
  e.put_u64(a.version);
  e.put_i64(a.clock);
  e.put_u8(static_cast<std::uint8_t>(a.mode));
  return e.take();
}

Bytes canonical_encode(const LandmarkResponse& r) {
  Encoder e;
  e.put_u8(kTagLandmark);
  e.put_string(r.landmark_id);
  e.put_string(r.device_id);
  e.put_f64(r.distance);
  return e.take();
}

Bytes canonical_encode(const DenialRecord& d) {
  Encoder e;
  e.put_u8(kTagDenial);
  e.put_string(d.issuer);
  std::vector<std::string> ids = d.device_ids;
  std::sort(ids.begin(), ids.end());
  e.put_count(ids.size());
  for (const auto& id : ids) e.put_string(id);
  e.put_i64(d.issued_at);
  return e.take();
}

}  // namespace hegsim::protocol

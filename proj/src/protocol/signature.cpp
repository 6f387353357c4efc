#include "hegsim/protocol/signature.hpp"

#include "hegsim/core/digest.hpp"

namespace hegsim::protocol {

namespace {

Bytes tagged_digest(std::string_view identity, const Bytes& payload) {
  Encoder e;
  e.put_string(identity);
  Bytes material = e.take();
  material.insert(material.end(), payload.begin(), payload.end());
  Digest d = sha256(material);
  return Bytes(d.begin(), d.end());
}

}  // namespace

Bytes sign_payload(std::string_view key, const Bytes& payload) {
  return tagged_digest(key, payload);
}

bool verify_payload(std::string_view identity, const Bytes& payload,
                    const Bytes& signature) {
  return tagged_digest(identity, payload) == signature;
}

}  // namespace hegsim::protocol

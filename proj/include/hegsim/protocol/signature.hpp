#pragma once

#include <string_view>

#include "hegsim/core/bytes.hpp"

namespace hegsim::protocol {

/// Deterministic mock signature scheme for the simulation: the signature is
/// SHA-256 over the signer identity (length-prefixed) and the payload, and
/// the key secret is the identity string itself. Unforgeable only against
/// parties that play by the simulation's rules; the contract (verify
/// succeeds exactly for the identity and bytes that were signed) matches
/// what a real scheme would provide, so one can be substituted without
/// touching call sites. Test vectors live in tests/fixtures.
Bytes sign_payload(std::string_view key, const Bytes& payload);

bool verify_payload(std::string_view identity, const Bytes& payload,
                    const Bytes& signature);

}  // namespace hegsim::protocol

#pragma once

#include "hegsim/core/bytes.hpp"
#include "hegsim/protocol/types.hpp"

namespace hegsim::protocol {

/// Canonical byte form of each signable artifact, signatures excluded.
/// Deterministic and injective: fixed field order, 8-byte big-endian
/// integers, 4-byte big-endian length prefixes, 1-byte enum tags, limits
/// as IEEE-754 bit patterns. Grants are sorted by their encoded bytes so
/// logically equal rulesets encode identically. Layout details and the
/// leading artifact tags are documented in docs/formats.md.
Bytes canonical_encode(const FirmwareUpdate& u);
Bytes canonical_encode(const ExtensionCertificate& e);
Bytes canonical_encode(const OperatingLicense& l);
Bytes canonical_encode(const Attestation& a);
Bytes canonical_encode(const LandmarkResponse& r);
Bytes canonical_encode(const DenialRecord& d);

/// Grant bytes in canonical (sorted) order, shared by ruleset encoding.
Bytes encode_grant(const CapabilityGrant& g);

}  // namespace hegsim::protocol

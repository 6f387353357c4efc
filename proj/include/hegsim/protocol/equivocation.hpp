#pragma once

#include <vector>

#include "hegsim/protocol/types.hpp"

namespace hegsim::protocol {

/// Scans a pile of signed updates and extensions for approver
/// equivocation: two artifacts validly signed by the same approver that
/// either reuse a serial for different payloads, or declare different
/// artifacts live over overlapping windows. The per-approver scan is an
/// interval sweep over window start points. Transcript-disciplined signers
/// never produce conflicts; the empty result certifies that.
///
/// Each offending pair yields one Conflict (indices into the input, first
/// < second) with both flags reflecting everything wrong with the pair.
/// Invalid signatures do not attribute an artifact to an approver.
std::vector<Conflict> detect_equivocation(
    const std::vector<SignedArtifact>& artifacts);

}  // namespace hegsim::protocol

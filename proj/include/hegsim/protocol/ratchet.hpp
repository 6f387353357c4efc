#pragma once

#include "hegsim/protocol/types.hpp"

namespace hegsim::protocol {

/// Permissiveness partial order on grants: b dominates a when both cover
/// the same workload class, every limit of b is at least a's, and b keeps
/// a's irrevocability. Unbounded limits dominate every bounded one.
bool grant_dominates(const CapabilityGrant& a, const CapabilityGrant& b);

/// True when `next` is at least as permissive as `prev`: every grant of
/// `prev` is dominated by some grant of `next`. Reflexive and transitive;
/// policies in ratchet mode refuse installs where this fails.
bool check_ratchet(const Ruleset& prev, const Ruleset& next);

}  // namespace hegsim::protocol

#include "hegsim/protocol/ratchet.hpp"

#include <algorithm>

namespace hegsim::protocol {

bool grant_dominates(const CapabilityGrant& a, const CapabilityGrant& b) {
  if (a.workload_class != b.workload_class) return false;
  if (a.irrevocable && !b.irrevocable) return false;
  return b.flop_limit >= a.flop_limit &&
         b.cluster_size_limit >= a.cluster_size_limit &&
         b.bandwidth_limit >= a.bandwidth_limit;
}

bool check_ratchet(const Ruleset& prev, const Ruleset& next) {
  return std::all_of(prev.grants.begin(), prev.grants.end(),
                     [&](const CapabilityGrant& old_grant) {
                       return std::any_of(next.grants.begin(), next.grants.end(),
                                          [&](const CapabilityGrant& new_grant) {
                                            return grant_dominates(old_grant,
                                                                   new_grant);
                                          });
                     });
}

}  // namespace hegsim::protocol

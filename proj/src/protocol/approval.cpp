#include "hegsim/protocol/approval.hpp"

#include <algorithm>

#include "hegsim/protocol/encode.hpp"
#include "hegsim/protocol/signature.hpp"

namespace hegsim::protocol {

namespace {

bool has_valid_signature(const std::map<std::string, Bytes>& signatures,
                         const std::string& identity, const Bytes& payload) {
  auto it = signatures.find(identity);
  return it != signatures.end() &&
         verify_payload(identity, payload, it->second);
}

}  // namespace

std::size_t count_valid_signatures(const std::map<std::string, Bytes>& signatures,
                                   const ApproverPolicy& policy,
                                   const Bytes& payload) {
  std::size_t n = 0;
  for (const auto& approver : policy.approvers) {
    if (has_valid_signature(signatures, approver, payload)) ++n;
  }
  return n;
}

ApprovalResult verify_update_approval(const FirmwareUpdate& update,
                                      const ApproverPolicy& policy) {
  const Bytes payload = canonical_encode(update);
  ApprovalResult r;
  if (policy.update_rule.kind == UpdateRule::Kind::AllApprovers) {
    for (const auto& approver : policy.approvers) {
      if (!has_valid_signature(update.signatures, approver, payload)) {
        r.missing = approver;
        r.shortfall += 1;
      }
    }
    r.accepted = r.shortfall == 0;
    if (!r.accepted) {
      // Report the first missing approver in policy order.
      for (const auto& approver : policy.approvers) {
        if (!has_valid_signature(update.signatures, approver, payload)) {
          r.missing = approver;
          break;
        }
      }
    }
    return r;
  }
  const std::size_t k = policy.update_rule.k;
  const std::size_t have =
      count_valid_signatures(update.signatures, policy, payload);
  r.accepted = have >= k;
  r.shortfall = r.accepted ? 0 : k - have;
  if (!r.accepted) {
    for (const auto& approver : policy.approvers) {
      if (!has_valid_signature(update.signatures, approver, payload)) {
        r.missing = approver;
        break;
      }
    }
  }
  return r;
}

}  // namespace hegsim::protocol

#pragma once

#include <string>

#include "hegsim/protocol/types.hpp"

namespace hegsim::protocol {

/// Accept/Reject outcome for update approval. On rejection, `missing`
/// names the first policy approver lacking a valid signature and
/// `shortfall` counts how many more valid signatures were needed.
struct ApprovalResult {
  bool accepted = false;
  std::string missing;
  std::size_t shortfall = 0;
};

/// Checks update.signatures against the policy's quorum rule over the
/// canonical bytes. Signatures from identities outside the policy, and
/// invalid signatures, are ignored rather than fatal.
ApprovalResult verify_update_approval(const FirmwareUpdate& update,
                                      const ApproverPolicy& policy);

/// Quorum check shared with lifetime extensions: counts distinct policy
/// approvers with valid signatures over `payload`.
std::size_t count_valid_signatures(const std::map<std::string, Bytes>& signatures,
                                   const ApproverPolicy& policy,
                                   const Bytes& payload);

}  // namespace hegsim::protocol

#pragma once

#include "hegsim/core/result.hpp"
#include "hegsim/protocol/types.hpp"

namespace hegsim::protocol {

struct SignOutcome {
  Bytes signature;
  SignerDevice signer;  // transcript appended, next_serial advanced
};

SignerDevice make_signer(std::string identity, std::uint64_t next_serial = 1);

/// Signs a ruleset update after checking it against the signer's own
/// transcript. Refusals:
///   SerialRegression    serial already consumed by a different artifact
///   SerialGap           serial skips ahead of next_serial
///   ConflictingWindow   the update's validity window [issued_at,
///                       issued_at+lifetime) overlaps a transcript entry
///                       that declares a different artifact live
/// Re-signing the byte-identical artifact is idempotent: same signature,
/// transcript unchanged.
Result<SignOutcome> approver_sign_update(SignerDevice signer,
                                         const FirmwareUpdate& update);

/// Same discipline for lifetime extensions. The extension's window is
/// [extends_expiry, new_expiry): it declares the target update live past
/// its old expiry. An extension whose window overlaps an entry for a
/// different artifact is refused; extending the very update an entry
/// declares is not a conflict (both declare the same artifact live).
Result<SignOutcome> approver_sign_extension(SignerDevice signer,
                                            const ExtensionCertificate& ext);

}  // namespace hegsim::protocol

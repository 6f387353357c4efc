#include "hegsim/protocol/signer.hpp"

#include <cstdio>

#include "hegsim/core/digest.hpp"
#include "hegsim/protocol/encode.hpp"
#include "hegsim/protocol/signature.hpp"

namespace hegsim::protocol {

namespace {

struct Candidate {
  ArtifactKind kind;
  std::uint64_t serial;
  Tick window_start;
  Tick window_end;
  Digest payload_digest;
  std::uint64_t designated_serial;
};

bool windows_overlap(Tick a_start, Tick a_end, Tick b_start, Tick b_end) {
  return a_start < b_end && b_start < a_end;
}

// Whether two transcript items declare the same artifact live. Updates are
// identified by payload digest; an extension declares its target serial.
// Only differing declarations make an overlap a conflict.
bool same_declaration(const Candidate& c, const TranscriptEntry& e) {
  if (c.kind == ArtifactKind::Update && e.kind == ArtifactKind::Update) {
    return c.payload_digest == e.payload_digest;
  }
  return c.designated_serial == e.designated_serial;
}

std::string serial_detail(std::uint64_t got, std::uint64_t expected) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "serial %llu, next expected %llu",
                static_cast<unsigned long long>(got),
                static_cast<unsigned long long>(expected));
  return buf;
}

Result<SignOutcome> sign_candidate(SignerDevice signer, const Candidate& c,
                                   const Bytes& payload) {
  for (const auto& entry : signer.transcript) {
    if (entry.serial == c.serial) {
      if (entry.kind == c.kind && entry.payload_digest == c.payload_digest) {
        // Byte-identical re-sign: deterministic scheme, same signature.
        return SignOutcome{sign_payload(signer.key, payload), std::move(signer)};
      }
      return Error{ErrorCode::ConflictingWindow,
                   "serial " + std::to_string(c.serial) +
                       " already signed over a different artifact"};
    }
  }
  if (c.serial < signer.next_serial) {
    return Error{ErrorCode::SerialRegression,
                 serial_detail(c.serial, signer.next_serial)};
  }
  if (c.serial > signer.next_serial) {
    return Error{ErrorCode::SerialGap, serial_detail(c.serial, signer.next_serial)};
  }
  if (c.window_end <= c.window_start) {
    return Error{ErrorCode::ConflictingWindow, "empty validity window"};
  }
  for (const auto& entry : signer.transcript) {
    if (windows_overlap(c.window_start, c.window_end, entry.window_start,
                        entry.window_end) &&
        !same_declaration(c, entry)) {
      return Error{ErrorCode::ConflictingWindow,
                   "window [" + std::to_string(c.window_start) + "," +
                       std::to_string(c.window_end) +
                       ") overlaps live artifact with serial " +
                       std::to_string(entry.serial)};
    }
  }
  Bytes signature = sign_payload(signer.key, payload);
  signer.transcript.push_back(TranscriptEntry{c.kind, c.serial, c.window_start,
                                              c.window_end, c.payload_digest,
                                              c.designated_serial});
  signer.next_serial = c.serial + 1;
  return SignOutcome{std::move(signature), std::move(signer)};
}

}  // namespace

SignerDevice make_signer(std::string identity, std::uint64_t next_serial) {
  SignerDevice s;
  s.key = identity;
  s.identity = std::move(identity);
  s.next_serial = next_serial;
  return s;
}

Result<SignOutcome> approver_sign_update(SignerDevice signer,
                                         const FirmwareUpdate& update) {
  Bytes payload = canonical_encode(update);
  Candidate c{ArtifactKind::Update,
              update.serial,
              update.issued_at,
              update.issued_at + update.lifetime,
              sha256(payload),
              update.serial};
  return sign_candidate(std::move(signer), c, payload);
}

Result<SignOutcome> approver_sign_extension(SignerDevice signer,
                                            const ExtensionCertificate& ext) {
  Bytes payload = canonical_encode(ext);
  Candidate c{ArtifactKind::Extension,
              ext.serial,
              ext.extends_expiry,
              ext.new_expiry,
              sha256(payload),
              ext.target_serial};
  return sign_candidate(std::move(signer), c, payload);
}

}  // namespace hegsim::protocol

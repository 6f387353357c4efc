#include "hegsim/protocol/equivocation.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "hegsim/core/digest.hpp"
#include "hegsim/protocol/encode.hpp"
#include "hegsim/protocol/signature.hpp"

namespace hegsim::protocol {

namespace {

struct Claim {
  std::size_t index;  // position in the input list
  ArtifactKind kind;
  std::uint64_t serial;
  Tick window_start;
  Tick window_end;
  Digest payload_digest;
  std::uint64_t designated_serial;
};

bool same_declaration(const Claim& a, const Claim& b) {
  if (a.kind == ArtifactKind::Update && b.kind == ArtifactKind::Update) {
    return a.payload_digest == b.payload_digest;
  }
  return a.designated_serial == b.designated_serial;
}

void extract_claims(const SignedArtifact& artifact, std::size_t index,
                    std::map<std::string, std::vector<Claim>>& by_approver) {
  Claim c;
  c.index = index;
  Bytes payload;
  const std::map<std::string, Bytes>* signatures = nullptr;
  if (const auto* u = std::get_if<FirmwareUpdate>(&artifact)) {
    payload = canonical_encode(*u);
    c.kind = ArtifactKind::Update;
    c.serial = u->serial;
    c.window_start = u->issued_at;
    c.window_end = u->issued_at + u->lifetime;
    c.designated_serial = u->serial;
    signatures = &u->signatures;
  } else {
    const auto& e = std::get<ExtensionCertificate>(artifact);
    payload = canonical_encode(e);
    c.kind = ArtifactKind::Extension;
    c.serial = e.serial;
    c.window_start = e.extends_expiry;
    c.window_end = e.new_expiry;
    c.designated_serial = e.target_serial;
    signatures = &e.signatures;
  }
  c.payload_digest = sha256(payload);
  for (const auto& [identity, sig] : *signatures) {
    if (verify_payload(identity, payload, sig)) {
      by_approver[identity].push_back(c);
    }
  }
}

using PairKey = std::pair<std::size_t, std::size_t>;

PairKey ordered(std::size_t a, std::size_t b) {
  return a < b ? PairKey{a, b} : PairKey{b, a};
}

}  // namespace

std::vector<Conflict> detect_equivocation(
    const std::vector<SignedArtifact>& artifacts) {
  std::map<std::string, std::vector<Claim>> by_approver;
  for (std::size_t i = 0; i < artifacts.size(); ++i) {
    extract_claims(artifacts[i], i, by_approver);
  }

  std::vector<Conflict> out;
  for (auto& [approver, claims] : by_approver) {
    std::map<PairKey, Conflict> found;
    auto flag = [&](const Claim& a, const Claim& b, bool dup, bool overlap) {
      PairKey key = ordered(a.index, b.index);
      auto it = found.try_emplace(
                       key, Conflict{approver, key.first, key.second, false, false})
                    .first;
      it->second.duplicate_serial |= dup;
      it->second.window_overlap |= overlap;
    };

    // Serial reuse with differing payloads.
    std::map<std::uint64_t, std::vector<const Claim*>> by_serial;
    for (const auto& c : claims) by_serial[c.serial].push_back(&c);
    for (const auto& [serial, group] : by_serial) {
      for (std::size_t i = 0; i < group.size(); ++i) {
        for (std::size_t j = i + 1; j < group.size(); ++j) {
          if (group[i]->payload_digest != group[j]->payload_digest) {
            flag(*group[i], *group[j], true, false);
          }
        }
      }
    }

    // Overlapping windows declaring different artifacts live: sweep over
    // sorted start points; every still-active window overlaps the incomer.
    std::vector<const Claim*> order;
    order.reserve(claims.size());
    for (const auto& c : claims) {
      if (c.window_end > c.window_start) order.push_back(&c);
    }
    std::sort(order.begin(), order.end(),
              [](const Claim* a, const Claim* b) {
                return std::tie(a->window_start, a->index) <
                       std::tie(b->window_start, b->index);
              });
    std::vector<const Claim*> active;
    for (const Claim* c : order) {
      active.erase(std::remove_if(active.begin(), active.end(),
                                  [&](const Claim* a) {
                                    return a->window_end <= c->window_start;
                                  }),
                   active.end());
      for (const Claim* a : active) {
        if (a->index != c->index && !same_declaration(*a, *c)) {
          flag(*a, *c, false, true);
        }
      }
      active.push_back(c);
    }

    for (auto& [key, conflict] : found) out.push_back(std::move(conflict));
  }

  std::sort(out.begin(), out.end(), [](const Conflict& a, const Conflict& b) {
    return std::tie(a.approver, a.first, a.second) <
           std::tie(b.approver, b.first, b.second);
  });
  return out;
}

}  // namespace hegsim::protocol

#include "hegsim/repro/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <tuple>

#include "hegsim/core/digest.hpp"
#include "hegsim/protocol/encode.hpp"
#include "hegsim/protocol/signature.hpp"

namespace hegsim::repro {

namespace {

using protocol::Conflict;
using protocol::SignedArtifact;

struct View {
  bool is_update = true;
  std::uint64_t serial = 0;
  std::uint64_t designated = 0;
  Tick start = 0;
  Tick end = 0;
  Digest digest{};
  Bytes payload;
  const std::map<std::string, Bytes>* signatures = nullptr;
};

View view_of(const SignedArtifact& artifact) {
  View v;
  if (const auto* u = std::get_if<protocol::FirmwareUpdate>(&artifact)) {
    v.is_update = true;
    v.serial = u->serial;
    v.designated = u->serial;
    v.start = u->issued_at;
    v.end = u->issued_at + u->lifetime;
    v.payload = protocol::canonical_encode(*u);
    v.signatures = &u->signatures;
  } else {
    const auto& e = std::get<protocol::ExtensionCertificate>(artifact);
    v.is_update = false;
    v.serial = e.serial;
    v.designated = e.target_serial;
    v.start = e.extends_expiry;
    v.end = e.new_expiry;
    v.payload = protocol::canonical_encode(e);
    v.signatures = &e.signatures;
  }
  v.digest = sha256(v.payload);
  return v;
}

bool validly_signed_by(const View& v, const std::string& id) {
  auto it = v.signatures->find(id);
  return it != v.signatures->end() &&
         protocol::verify_payload(id, v.payload, it->second);
}

}  // namespace

std::vector<Conflict> naive_detect(
    const std::vector<SignedArtifact>& artifacts) {
  std::vector<View> views;
  views.reserve(artifacts.size());
  std::set<std::string> identities;
  for (const auto& a : artifacts) {
    views.push_back(view_of(a));
    for (const auto& [id, sig] : *views.back().signatures) {
      identities.insert(id);
    }
  }

  std::vector<Conflict> out;
  for (const auto& id : identities) {
    for (std::size_t i = 0; i < views.size(); ++i) {
      if (!validly_signed_by(views[i], id)) continue;
      for (std::size_t j = i + 1; j < views.size(); ++j) {
        if (!validly_signed_by(views[j], id)) continue;
        const View& a = views[i];
        const View& b = views[j];
        const bool dup = a.serial == b.serial && a.digest != b.digest;
        const bool same_declaration =
            (a.is_update && b.is_update) ? a.digest == b.digest
                                         : a.designated == b.designated;
        const bool overlap = std::max(a.start, b.start) <
                                 std::min(a.end, b.end) &&
                             !same_declaration;
        if (dup || overlap) {
          out.push_back(Conflict{id, i, j, dup, overlap});
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Conflict& a, const Conflict& b) {
    return std::tie(a.approver, a.first, a.second) <
           std::tie(b.approver, b.first, b.second);
  });
  return out;
}

std::pair<std::uint64_t, std::uint64_t> enumerate_fixed_customer(
    std::size_t population, std::size_t compromised, std::size_t customers) {
  const std::size_t share = population / customers;
  const std::uint32_t all = (1u << compromised) - 1u;
  std::uint64_t favorable = 0;
  std::uint64_t total = 0;
  for (std::uint32_t mask = 0; mask < (1u << population); ++mask) {
    if (std::popcount(mask) != static_cast<int>(share)) continue;
    ++total;
    if ((mask & all) == all) ++favorable;
  }
  return {favorable, total};
}

double three_sigma_band(double p, std::size_t trials) {
  return 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

}  // namespace hegsim::repro

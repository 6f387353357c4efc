#include <doctest.h>

#include "hegsim/protocol/approval.hpp"
#include "hegsim/protocol/encode.hpp"
#include "hegsim/protocol/signature.hpp"

using namespace hegsim;
using namespace hegsim::protocol;

namespace {

FirmwareUpdate base_update() {
  FirmwareUpdate u;
  u.serial = 5;
  u.version = 2;
  u.ruleset.ruleset_id = "quorum-check";
  u.lifetime = 30;
  return u;
}

ApproverPolicy three_party(UpdateRule::Kind kind, std::size_t k = 0) {
  ApproverPolicy p;
  p.approvers = {"p1", "p2", "p3"};
  p.update_rule.kind = kind;
  p.update_rule.k = k;
  return p;
}

FirmwareUpdate signed_by(const FirmwareUpdate& u,
                         const std::vector<std::string>& identities) {
  FirmwareUpdate out = u;
  const Bytes payload = canonical_encode(u);
  for (const auto& id : identities) {
    out.signatures[id] = sign_payload(id, payload);
  }
  return out;
}

}  // namespace

TEST_CASE("unanimity: every proper subset of signers is vetoed") {
  const auto policy = three_party(UpdateRule::Kind::AllApprovers);
  const FirmwareUpdate u = base_update();
  for (unsigned mask = 0; mask < 8; ++mask) {
    std::vector<std::string> signers;
    for (unsigned bit = 0; bit < 3; ++bit) {
      if (mask & (1u << bit)) signers.push_back(policy.approvers[bit]);
    }
    const auto result = verify_update_approval(signed_by(u, signers), policy);
    CHECK(result.accepted == (mask == 7u));
    if (mask != 7u) {
      CHECK(result.shortfall == 3 - signers.size());
      CHECK_FALSE(result.missing.empty());
    }
  }
}

TEST_CASE("missing names the first unsatisfied approver in policy order") {
  const auto policy = three_party(UpdateRule::Kind::AllApprovers);
  const auto result =
      verify_update_approval(signed_by(base_update(), {"p1", "p3"}), policy);
  CHECK_FALSE(result.accepted);
  CHECK(result.missing == "p2");
  CHECK(result.shortfall == 1);
}

TEST_CASE("threshold 2-of-3 accepts any two valid signatures") {
  const auto policy = three_party(UpdateRule::Kind::Threshold, 2);
  const FirmwareUpdate u = base_update();
  CHECK_FALSE(verify_update_approval(signed_by(u, {}), policy).accepted);
  CHECK_FALSE(verify_update_approval(signed_by(u, {"p2"}), policy).accepted);
  CHECK(verify_update_approval(signed_by(u, {"p1", "p3"}), policy).accepted);
  CHECK(verify_update_approval(signed_by(u, {"p2", "p3"}), policy).accepted);
  CHECK(verify_update_approval(signed_by(u, {"p1", "p2", "p3"}), policy).accepted);
}

TEST_CASE("signatures outside the policy never count") {
  const auto policy = three_party(UpdateRule::Kind::Threshold, 2);
  FirmwareUpdate u = signed_by(base_update(), {"p1"});
  const Bytes payload = canonical_encode(base_update());
  u.signatures["outsider"] = sign_payload("outsider", payload);
  u.signatures["mallory"] = sign_payload("mallory", payload);
  const auto result = verify_update_approval(u, policy);
  CHECK_FALSE(result.accepted);
  CHECK(result.shortfall == 1);
}

TEST_CASE("an invalid signature is ignored, not fatal") {
  const auto policy = three_party(UpdateRule::Kind::AllApprovers);
  FirmwareUpdate u = signed_by(base_update(), {"p1", "p2", "p3"});

  SUBCASE("corrupted bytes") {
    u.signatures["p2"][0] ^= 0x01;
  }
  SUBCASE("signature over different bytes") {
    FirmwareUpdate other = base_update();
    other.lifetime += 1;
    u.signatures["p2"] = sign_payload("p2", canonical_encode(other));
  }
  SUBCASE("someone else's key under p2's name") {
    u.signatures["p2"] = sign_payload("p9", canonical_encode(base_update()));
  }

  const auto result = verify_update_approval(u, policy);
  CHECK_FALSE(result.accepted);
  CHECK(result.missing == "p2");
  CHECK(result.shortfall == 1);
}

TEST_CASE("count_valid_signatures matches the shared quorum arithmetic") {
  const auto policy = three_party(UpdateRule::Kind::AllApprovers);
  const FirmwareUpdate u = signed_by(base_update(), {"p1", "p3", "stranger"});
  const Bytes payload = canonical_encode(base_update());
  CHECK(count_valid_signatures(u.signatures, policy, payload) == 2);
  CHECK(count_valid_signatures({}, policy, payload) == 0);
}

TEST_CASE("single-approver unanimity degenerates to one signature") {
  ApproverPolicy policy;
  policy.approvers = {"solo"};
  const FirmwareUpdate u = base_update();
  CHECK_FALSE(verify_update_approval(signed_by(u, {}), policy).accepted);
  CHECK(verify_update_approval(signed_by(u, {"solo"}), policy).accepted);
}

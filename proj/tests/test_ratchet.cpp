#include <doctest.h>

#include "hegsim/protocol/device.hpp"
#include "hegsim/protocol/encode.hpp"
#include "hegsim/protocol/ratchet.hpp"
#include "hegsim/protocol/signature.hpp"

using namespace hegsim;
using namespace hegsim::protocol;

namespace {

CapabilityGrant grant(WorkloadClass c, double flop, double cluster, double bw,
                      bool irrevocable = false) {
  return CapabilityGrant{c, flop, cluster, bw, irrevocable};
}

Ruleset rules(const std::string& id, std::vector<CapabilityGrant> grants) {
  Ruleset r;
  r.ruleset_id = id;
  r.grants = std::move(grants);
  return r;
}

}  // namespace

TEST_CASE("grant domination is a permissiveness order") {
  const auto small = grant(WorkloadClass::Training, 1e14, 32, 1e10);
  const auto big = grant(WorkloadClass::Training, 1e15, 64, 1e11);
  const auto unbounded = grant(WorkloadClass::Training, kUnbounded, kUnbounded,
                               kUnbounded);

  CHECK(grant_dominates(small, big));
  CHECK_FALSE(grant_dominates(big, small));
  CHECK(grant_dominates(small, small));  // reflexive
  CHECK(grant_dominates(big, unbounded));
  CHECK_FALSE(grant_dominates(unbounded, big));

  SUBCASE("class mismatch never dominates") {
    const auto inf = grant(WorkloadClass::Inference, 1e15, 64, 1e11);
    CHECK_FALSE(grant_dominates(small, inf));
    CHECK_FALSE(grant_dominates(inf, big));
  }
  SUBCASE("one shrunk limit breaks domination") {
    auto narrower_bw = big;
    narrower_bw.bandwidth_limit = 1e9;
    CHECK_FALSE(grant_dominates(small, narrower_bw));
  }
  SUBCASE("irrevocability must be preserved") {
    const auto keeper = grant(WorkloadClass::Training, 1e14, 32, 1e10, true);
    CHECK_FALSE(grant_dominates(keeper, big));
    auto big_keeper = big;
    big_keeper.irrevocable = true;
    CHECK(grant_dominates(keeper, big_keeper));
    // A revocable grant may gain irrevocability.
    CHECK(grant_dominates(small, big_keeper));
  }
}

TEST_CASE("ruleset ratchet accepts only widening changes") {
  const auto prev = rules("prev", {grant(WorkloadClass::Training, 1e14, 32, 1e10),
                                   grant(WorkloadClass::Inference, 1e12, 8, 1e9)});

  CHECK(check_ratchet(prev, prev));  // reflexive

  SUBCASE("raising limits passes") {
    const auto next = rules("next", {grant(WorkloadClass::Training, 1e15, 64, 1e11),
                                     grant(WorkloadClass::Inference, 1e12, 8, 1e9)});
    CHECK(check_ratchet(prev, next));
  }
  SUBCASE("adding a class passes") {
    auto next = prev;
    next.grants.push_back(grant(WorkloadClass::FineTuning, 1e12, 8, 1e9));
    CHECK(check_ratchet(prev, next));
  }
  SUBCASE("dropping a class fails") {
    const auto next = rules("next", {grant(WorkloadClass::Training, 1e15, 64, 1e11)});
    CHECK_FALSE(check_ratchet(prev, next));
  }
  SUBCASE("shrinking one limit fails") {
    const auto next = rules("next", {grant(WorkloadClass::Training, 1e13, 32, 1e10),
                                     grant(WorkloadClass::Inference, 1e12, 8, 1e9)});
    CHECK_FALSE(check_ratchet(prev, next));
  }
  SUBCASE("a single wide grant can dominate several narrow ones") {
    const auto next = rules("next", {grant(WorkloadClass::Training, kUnbounded,
                                           kUnbounded, kUnbounded),
                                     grant(WorkloadClass::Inference, kUnbounded,
                                           kUnbounded, kUnbounded)});
    CHECK(check_ratchet(prev, next));
  }
}

TEST_CASE("ratchet mode turns narrowing installs into refusals") {
  ApproverPolicy policy;
  policy.approvers = {"gov"};
  policy.ratchet_mode = true;

  InstalledFirmware fw;
  fw.serial = 1;
  fw.version = 1;
  fw.ruleset = rules("factory", {grant(WorkloadClass::Training, 1e15, 64, 1e11)});
  fw.expiry = 100;
  DeviceState d = make_device("dut", fw);

  FirmwareUpdate narrowing;
  narrowing.serial = 2;
  narrowing.version = 2;
  narrowing.ruleset = rules("narrow", {grant(WorkloadClass::Training, 1e14, 64, 1e11)});
  narrowing.lifetime = 50;
  narrowing.signatures["gov"] = sign_payload("gov", canonical_encode(narrowing));

  auto refused = install_update(d, narrowing, policy);
  REQUIRE_FALSE(refused.ok());
  CHECK(refused.error().code == ErrorCode::RatchetViolation);

  // The same install passes with ratchet mode off.
  policy.ratchet_mode = false;
  CHECK(install_update(d, narrowing, policy).ok());

  // And a widening install passes in ratchet mode.
  policy.ratchet_mode = true;
  FirmwareUpdate widening;
  widening.serial = 2;
  widening.version = 2;
  widening.ruleset = rules("wide", {grant(WorkloadClass::Training, 1e16, 128, 1e12)});
  widening.lifetime = 50;
  widening.signatures["gov"] = sign_payload("gov", canonical_encode(widening));
  CHECK(install_update(d, widening, policy).ok());
}

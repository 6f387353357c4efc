#include <doctest.h>

#include "hegsim/protocol/device.hpp"
#include "hegsim/protocol/encode.hpp"
#include "hegsim/protocol/signature.hpp"

using namespace hegsim;
using namespace hegsim::protocol;

namespace {

ApproverPolicy one_party() {
  ApproverPolicy p;
  p.approvers = {"gov"};
  p.extension_fraction = Fraction{1, 1};
  return p;
}

Ruleset training_rules(const std::string& id, double flop, double cluster,
                       double bw) {
  Ruleset r;
  r.ruleset_id = id;
  r.grants = {CapabilityGrant{WorkloadClass::Training, flop, cluster, bw, false}};
  return r;
}

DeviceState fresh_device(std::optional<Ruleset> baseline = std::nullopt) {
  InstalledFirmware fw;
  fw.serial = 1;
  fw.version = 1;
  fw.ruleset = training_rules("factory", 1e15, 64, 1e11);
  fw.expiry = 100;
  return make_device("dut", fw, std::move(baseline));
}

FirmwareUpdate approved_update(std::uint64_t serial, Tick lifetime,
                               Ruleset rules) {
  FirmwareUpdate u;
  u.serial = serial;
  u.version = serial;
  u.ruleset = std::move(rules);
  u.lifetime = lifetime;
  u.signatures["gov"] = sign_payload("gov", canonical_encode(u));
  return u;
}

ExtensionCertificate approved_ext(std::uint64_t target, Tick extends,
                                  Tick fresh) {
  ExtensionCertificate e;
  e.serial = 99;
  e.target_serial = target;
  e.extends_expiry = extends;
  e.new_expiry = fresh;
  e.signatures["gov"] = sign_payload("gov", canonical_encode(e));
  return e;
}

WorkloadDescriptor training(double flop, double cluster = 1, double bw = 0) {
  WorkloadDescriptor w;
  w.workload_class = WorkloadClass::Training;
  w.total_flop = flop;
  w.cluster_size = cluster;
  w.bandwidth = bw;
  return w;
}

}  // namespace

TEST_CASE("install replaces firmware and re-arms the expiry from the local clock") {
  DeviceState d = advance_clock(fresh_device(), 10);
  auto r = install_update(d, approved_update(2, 50, training_rules("v2", 1e16, 64, 1e11)),
                          one_party());
  REQUIRE(r.ok());
  CHECK(r.value().installed.serial == 2);
  CHECK(r.value().installed.version == 2);
  CHECK(r.value().installed.expiry == 60);  // clock 10 + lifetime 50
  CHECK(r.value().rollback_floor == 2);
  CHECK(r.value().mode == Mode::Active);
}

TEST_CASE("install refusal order is pinned") {
  const auto policy = one_party();
  const auto good = approved_update(2, 50, training_rules("v2", 1e16, 64, 1e11));

  SUBCASE("locked down wins over everything") {
    DeviceState d = fresh_device();  // no baseline: expiry locks it down
    d = advance_clock(d, 200);
    REQUIRE(d.mode == Mode::LockedDown);
    FirmwareUpdate unsigned_rollback = good;
    unsigned_rollback.serial = 1;
    unsigned_rollback.signatures.clear();
    auto r = install_update(d, unsigned_rollback, policy);
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().code == ErrorCode::DeviceLockedDown);
  }
  SUBCASE("approval is checked before rollback") {
    FirmwareUpdate u = good;
    u.serial = 1;  // would also be a rollback
    u.signatures.clear();
    auto r = install_update(fresh_device(), u, policy);
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().code == ErrorCode::ApprovalInvalid);
  }
  SUBCASE("equal serial is already a rollback") {
    FirmwareUpdate u;
    u.serial = 1;
    u.version = 7;
    u.ruleset = training_rules("v7", 1e16, 64, 1e11);
    u.lifetime = 50;
    u.signatures["gov"] = sign_payload("gov", canonical_encode(u));
    auto r = install_update(fresh_device(), u, policy);
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().code == ErrorCode::RollbackRejected);
  }
}

TEST_CASE("signature on different bytes does not approve this update") {
  FirmwareUpdate u;
  u.serial = 2;
  u.version = 2;
  u.ruleset = training_rules("v2", 1e16, 64, 1e11);
  u.lifetime = 50;
  FirmwareUpdate tweaked = u;
  tweaked.lifetime = 51;
  u.signatures["gov"] = sign_payload("gov", canonical_encode(tweaked));
  auto r = install_update(fresh_device(), u, one_party());
  REQUIRE_FALSE(r.ok());
  CHECK(r.error().code == ErrorCode::ApprovalInvalid);
}

TEST_CASE("expiry degrades by baseline presence") {
  SUBCASE("no baseline locks down") {
    DeviceState d = advance_clock(fresh_device(), 100);
    CHECK(d.mode == Mode::LockedDown);
  }
  SUBCASE("baseline falls back") {
    Ruleset base;
    base.ruleset_id = "base";
    base.grants = {CapabilityGrant{WorkloadClass::NonAI, 1e12, 4, 1e9, false}};
    DeviceState d = advance_clock(fresh_device(base), 100);
    CHECK(d.mode == Mode::BaselineFallback);

    // Baseline permits small non-AI work and nothing else.
    WorkloadDescriptor small;
    small.workload_class = WorkloadClass::NonAI;
    small.total_flop = 1e10;
    CHECK(evaluate_workload(d, small).allowed);
    const auto denied = evaluate_workload(d, training(1e10));
    CHECK_FALSE(denied.allowed);
    CHECK(denied.reason == DenyReason::NoMatchingGrant);
  }
}

TEST_CASE("locked down is absorbing") {
  DeviceState d = advance_clock(fresh_device(), 100);
  REQUIRE(d.mode == Mode::LockedDown);
  d = advance_clock(d, 1000);
  CHECK(d.mode == Mode::LockedDown);
  const auto decision = evaluate_workload(d, training(1));
  CHECK_FALSE(decision.allowed);
  CHECK(decision.reason == DenyReason::LockedDown);

  auto ext = approved_ext(1, 100, 300);
  auto r = extend_lifetime(d, ext, one_party());
  REQUIRE_FALSE(r.ok());
  CHECK(r.error().code == ErrorCode::DeviceLockedDown);
}

TEST_CASE("a fresh full update rescues a fallen-back device") {
  Ruleset base;
  base.ruleset_id = "base";
  base.grants = {CapabilityGrant{WorkloadClass::NonAI, 1e12, 4, 1e9, false}};
  DeviceState d = advance_clock(fresh_device(base), 100);
  REQUIRE(d.mode == Mode::BaselineFallback);

  auto ext = approved_ext(1, 100, 300);
  auto no = extend_lifetime(d, ext, one_party());
  REQUIRE_FALSE(no.ok());
  CHECK(no.error().code == ErrorCode::AlreadyExpired);

  auto yes = install_update(
      d, approved_update(2, 50, training_rules("v2", 1e15, 64, 1e11)),
      one_party());
  REQUIRE(yes.ok());
  CHECK(yes.value().mode == Mode::Active);
  CHECK(yes.value().installed.expiry == 150);
}

TEST_CASE("extension refusal order is pinned") {
  const auto policy = one_party();
  DeviceState d = fresh_device();

  SUBCASE("wrong target before expiry math") {
    auto ext = approved_ext(9, 100, 50);  // also non-monotone
    auto r = extend_lifetime(d, ext, policy);
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().code == ErrorCode::WrongTarget);
  }
  SUBCASE("non-monotone expiry") {
    auto r = extend_lifetime(d, approved_ext(1, 100, 100), policy);
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().code == ErrorCode::NonMonotoneExpiry);
  }
  SUBCASE("quorum shortfall reported last") {
    ExtensionCertificate ext;
    ext.serial = 99;
    ext.target_serial = 1;
    ext.extends_expiry = 100;
    ext.new_expiry = 300;
    auto r = extend_lifetime(d, ext, policy);
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().code == ErrorCode::InsufficientSignatures);
  }
  SUBCASE("valid extension moves only the expiry") {
    auto r = extend_lifetime(d, approved_ext(1, 100, 300), policy);
    REQUIRE(r.ok());
    CHECK(r.value().installed.expiry == 300);
    CHECK(r.value().installed.serial == 1);
    CHECK(r.value().mode == Mode::Active);
  }
}

TEST_CASE("extension quorum uses the configured fraction, not the update rule") {
  ApproverPolicy policy;
  policy.approvers = {"a", "b", "c"};
  policy.update_rule.kind = UpdateRule::Kind::AllApprovers;
  policy.extension_fraction = Fraction{1, 2};  // 2 of 3 after rounding up

  ExtensionCertificate ext;
  ext.serial = 99;
  ext.target_serial = 1;
  ext.extends_expiry = 100;
  ext.new_expiry = 300;
  const Bytes payload = canonical_encode(ext);
  ext.signatures["a"] = sign_payload("a", payload);

  auto one = extend_lifetime(fresh_device(), ext, policy);
  REQUIRE_FALSE(one.ok());
  CHECK(one.error().code == ErrorCode::InsufficientSignatures);

  ext.signatures["b"] = sign_payload("b", payload);
  auto two = extend_lifetime(fresh_device(), ext, policy);
  REQUIRE(two.ok());
  CHECK(two.value().installed.expiry == 300);
}

TEST_CASE("workload limits report the first violation in fixed order") {
  const DeviceState d = fresh_device();  // training up to 1e15 / 64 / 1e11

  CHECK(evaluate_workload(d, training(1e15, 64, 1e11)).allowed);

  auto flop = evaluate_workload(d, training(2e15, 100, 1e12));
  CHECK(flop.reason == DenyReason::FlopLimitExceeded);

  auto cluster = evaluate_workload(d, training(1e15, 100, 1e12));
  CHECK(cluster.reason == DenyReason::ClusterTooLarge);

  auto bw = evaluate_workload(d, training(1e15, 64, 1e12));
  CHECK(bw.reason == DenyReason::BandwidthTooHigh);

  WorkloadDescriptor inference;
  inference.workload_class = WorkloadClass::Inference;
  inference.total_flop = 1;
  CHECK(evaluate_workload(d, inference).reason == DenyReason::NoMatchingGrant);
}

TEST_CASE("non-AI workloads fit a grant of any class") {
  const DeviceState d = fresh_device();
  WorkloadDescriptor w;
  w.workload_class = WorkloadClass::NonAI;
  w.total_flop = 1e14;
  CHECK(evaluate_workload(d, w).allowed);
  w.total_flop = 1e16;
  CHECK(evaluate_workload(d, w).reason == DenyReason::FlopLimitExceeded);
}

TEST_CASE("specific authorization lifts only the training flop cap") {
  const DeviceState d = fresh_device();
  WorkloadDescriptor w = training(1e18);
  w.authorized = true;
  CHECK(evaluate_workload(d, w).allowed);

  // The escape does not cover the other limits.
  w.cluster_size = 1000;
  CHECK(evaluate_workload(d, w).reason == DenyReason::ClusterTooLarge);

  // Nor other classes: a non-AI workload over the cap stays denied.
  WorkloadDescriptor n;
  n.workload_class = WorkloadClass::NonAI;
  n.total_flop = 1e18;
  n.authorized = true;
  CHECK(evaluate_workload(d, n).reason == DenyReason::FlopLimitExceeded);
}

TEST_CASE("license gate applies only when the ruleset demands one") {
  Ruleset gated = training_rules("gated", 1e15, 64, 1e11);
  gated.requires_license = true;
  DeviceState d = fresh_device();
  auto r = install_update(d, approved_update(2, 50, gated), one_party());
  REQUIRE(r.ok());
  d = r.value();

  auto denied = evaluate_workload(d, training(1));
  CHECK(denied.reason == DenyReason::LicenseMissingOrExpired);

  OperatingLicense lic;
  lic.device_id = "dut";
  lic.expiry = 30;
  lic.issuer = "auth";
  lic.signature = sign_payload("auth", canonical_encode(lic));
  d.license = lic;
  CHECK(evaluate_workload(d, training(1)).allowed);

  SUBCASE("an expired license stops gating") {
    d = advance_clock(d, 30);
    CHECK(evaluate_workload(d, training(1)).reason ==
          DenyReason::LicenseMissingOrExpired);
  }
  SUBCASE("a license for another device does not transfer") {
    d.license->device_id = "other";
    CHECK(evaluate_workload(d, training(1)).reason ==
          DenyReason::LicenseMissingOrExpired);
  }
}

TEST_CASE("irrevocable grants survive every later install") {
  CapabilityGrant keeper{WorkloadClass::Inference, 1e12, 8, 1e9, true};
  InstalledFirmware fw;
  fw.serial = 1;
  fw.version = 1;
  fw.ruleset.ruleset_id = "factory";
  fw.ruleset.grants = {keeper};
  fw.expiry = 100;
  DeviceState d = make_device("dut", fw);

  auto r = install_update(
      d, approved_update(2, 50, training_rules("narrow", 1e15, 64, 1e11)),
      one_party());
  REQUIRE(r.ok());
  d = r.value();
  REQUIRE(d.installed.ruleset.grants.size() == 2);
  CHECK(d.installed.ruleset.grants[1] == keeper);

  // Carried again on the next install, but never duplicated.
  auto r2 = install_update(
      d, approved_update(3, 50, training_rules("next", 1e15, 64, 1e11)),
      one_party());
  REQUIRE(r2.ok());
  std::size_t copies = 0;
  for (const auto& g : r2.value().installed.ruleset.grants) {
    if (g == keeper) ++copies;
  }
  CHECK(copies == 1);

  WorkloadDescriptor w;
  w.workload_class = WorkloadClass::Inference;
  w.total_flop = 1e10;
  w.cluster_size = 2;
  CHECK(evaluate_workload(r2.value(), w).allowed);
}

TEST_CASE("negative clock steps are ignored") {
  DeviceState d = advance_clock(fresh_device(), 5);
  CHECK(d.clock == 5);
  d = advance_clock(d, -3);
  CHECK(d.clock == 5);
  CHECK(d.mode == Mode::Active);
}

TEST_CASE("power bookkeeping records half-open intervals") {
  DeviceState d = fresh_device();
  d = power_on(d, 0);
  d = power_on(d, 3);  // redundant on: first timestamp wins
  d = power_off(d, 10);
  d = power_off(d, 12);  // redundant off: ignored
  d = power_on(d, 20);
  d = power_off(d, 20);  // zero-length: dropped
  d = power_on(d, 30);
  REQUIRE(d.power_log.size() == 1);
  CHECK(d.power_log[0].start == 0);
  CHECK(d.power_log[0].end == 10);
  REQUIRE(d.powered_on_since.has_value());
  CHECK(*d.powered_on_since == 30);
}

#include <doctest.h>

#include <set>

#include "hegsim/protocol/attestation.hpp"
#include "hegsim/protocol/device.hpp"
#include "hegsim/protocol/licenses.hpp"
#include "hegsim/protocol/location.hpp"

using namespace hegsim;
using namespace hegsim::protocol;

namespace {

DeviceState plain_device(const std::string& id,
                         std::optional<LocationConfig> loc = std::nullopt) {
  InstalledFirmware fw;
  fw.serial = 1;
  fw.version = 1;
  fw.ruleset.ruleset_id = "factory";
  fw.expiry = 100;
  return make_device(id, fw, std::nullopt, std::move(loc));
}

const std::vector<std::string> kAuthorities = {"auth-1", "auth-2"};

}  // namespace

TEST_CASE("licenses issue from authorities and bind to one device") {
  auto lic = issue_license("auth-1", kAuthorities, {}, "dut", 30, 10);
  REQUIRE(lic.ok());
  CHECK(lic.value().expiry == 40);
  CHECK(lic.value().issuer == "auth-1");

  auto applied = apply_license(plain_device("dut"), lic.value());
  REQUIRE(applied.ok());
  REQUIRE(applied.value().license.has_value());
  CHECK(applied.value().license->expiry == 40);

  SUBCASE("unknown issuer") {
    auto r = issue_license("impostor", kAuthorities, {}, "dut", 30, 10);
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().code == ErrorCode::UnauthorizedIssuer);
  }
  SUBCASE("wrong device refuses the license") {
    auto r = apply_license(plain_device("other"), lic.value());
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().code == ErrorCode::DeviceMismatch);
  }
  SUBCASE("tampered expiry invalidates the signature") {
    OperatingLicense forged = lic.value();
    forged.expiry += 1000;
    auto r = apply_license(plain_device("dut"), forged);
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().code == ErrorCode::ApprovalInvalid);
  }
}

TEST_CASE("a standing denial blocks renewal until withdrawn") {
  const DenialRecord rec = deny_renewal("auth-1", {"dev-b", "dev-a"}, 50);
  CHECK(verify_denial(rec));
  CHECK(rec.device_ids == std::vector<std::string>{"dev-a", "dev-b"});

  std::vector<DenialRecord> ledger = {rec};
  auto denied = issue_license("auth-2", kAuthorities, ledger, "dev-a", 30, 60);
  REQUIRE_FALSE(denied.ok());
  CHECK(denied.error().code == ErrorCode::RenewalDenied);

  auto unaffected = issue_license("auth-2", kAuthorities, ledger, "dev-c", 30, 60);
  CHECK(unaffected.ok());

  ledger.clear();
  auto lifted = issue_license("auth-2", kAuthorities, ledger, "dev-a", 30, 60);
  CHECK(lifted.ok());
}

TEST_CASE("denial records are canonical and tamper-evident") {
  const DenialRecord a = deny_renewal("auth-1", {"d2", "d1", "d2"}, 5);
  const DenialRecord b = deny_renewal("auth-1", {"d1", "d2"}, 5);
  CHECK(a.device_ids == b.device_ids);
  CHECK(a.signature == b.signature);

  DenialRecord forged = a;
  forged.device_ids.push_back("d3");
  std::sort(forged.device_ids.begin(), forged.device_ids.end());
  CHECK_FALSE(verify_denial(forged));

  CHECK(find_denial({a}, "d1").has_value());
  CHECK_FALSE(find_denial({a}, "d9").has_value());
}

TEST_CASE("location verification needs one close, validly signed landmark") {
  LocationConfig cfg;
  cfg.landmarks = {"lm-1", "lm-2"};
  cfg.max_distance = 500;
  const DeviceState d = plain_device("dut", cfg);

  SUBCASE("close landmark passes") {
    const auto ok = sign_landmark_response("lm-1", "dut", 200);
    CHECK(verify_location(d, {ok}));
  }
  SUBCASE("one good response among bad ones is enough") {
    const auto far = sign_landmark_response("lm-1", "dut", 900);
    const auto ok = sign_landmark_response("lm-2", "dut", 499);
    CHECK(verify_location(d, {far, ok}));
  }
  SUBCASE("all far fails") {
    const auto far = sign_landmark_response("lm-1", "dut", 501);
    CHECK_FALSE(verify_location(d, {far}));
  }
  SUBCASE("unknown landmark does not count") {
    const auto rogue = sign_landmark_response("lm-9", "dut", 10);
    CHECK_FALSE(verify_location(d, {rogue}));
  }
  SUBCASE("response for another device does not count") {
    const auto other = sign_landmark_response("lm-1", "imposter", 10);
    CHECK_FALSE(verify_location(d, {other}));
  }
  SUBCASE("tampered distance invalidates the signature") {
    auto forged = sign_landmark_response("lm-1", "dut", 900);
    forged.distance = 100;
    CHECK_FALSE(verify_location(d, {forged}));
  }
  SUBCASE("no responses fails") {
    CHECK_FALSE(verify_location(d, {}));
  }
}

TEST_CASE("devices without location enforcement pass vacuously") {
  const DeviceState d = plain_device("dut");
  CHECK(verify_location(d, {}));
  const DeviceState same = enforce_location(d, {});
  CHECK(same.mode == Mode::Active);
}

TEST_CASE("a failed location check locks the device down") {
  LocationConfig cfg;
  cfg.landmarks = {"lm-1"};
  cfg.max_distance = 500;
  DeviceState d = plain_device("dut", cfg);

  d = enforce_location(d, {sign_landmark_response("lm-1", "dut", 100)});
  CHECK(d.mode == Mode::Active);

  d = enforce_location(d, {sign_landmark_response("lm-1", "dut", 9000)});
  CHECK(d.mode == Mode::LockedDown);

  // Lockdown sticks even if the device later reports a good position.
  d = enforce_location(d, {sign_landmark_response("lm-1", "dut", 100)});
  CHECK(d.mode == Mode::LockedDown);
}

TEST_CASE("attestation reports the device's live identity") {
  const std::set<std::string> known = {"dut", "dev-b"};
  DeviceState d = plain_device("dut");
  d = advance_clock(d, 7);

  Attestation att = produce_attestation(d);
  CHECK(att.device_id == "dut");
  CHECK(att.serial == 1);
  CHECK(att.clock == 7);
  CHECK(att.mode == Mode::Active);
  auto verdict = verify_attestation(att, known);
  REQUIRE(verdict.ok());
  CHECK(verdict.value());

  SUBCASE("a locked-down device attests its lockdown") {
    d = advance_clock(d, 200);
    REQUIRE(d.mode == Mode::LockedDown);
    const Attestation locked = produce_attestation(d);
    CHECK(locked.mode == Mode::LockedDown);
    auto v = verify_attestation(locked, known);
    REQUIRE(v.ok());
    CHECK(v.value());
  }
  SUBCASE("tampering breaks verification") {
    att.serial = 99;
    auto v = verify_attestation(att, known);
    REQUIRE(v.ok());
    CHECK_FALSE(v.value());
  }
  SUBCASE("unknown device is an error, not a false verdict") {
    att.device_id = "ghost";
    auto v = verify_attestation(att, known);
    REQUIRE_FALSE(v.ok());
    CHECK(v.error().code == ErrorCode::UnknownDevice);
  }
}

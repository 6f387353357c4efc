#include <doctest.h>

#include "hegsim/protocol/encode.hpp"
#include "hegsim/protocol/signature.hpp"
#include "hegsim/protocol/signer.hpp"

using namespace hegsim;
using namespace hegsim::protocol;

namespace {

FirmwareUpdate update_with(std::uint64_t serial, Tick issued_at, Tick lifetime,
                           const std::string& id = "r") {
  FirmwareUpdate u;
  u.serial = serial;
  u.version = serial;
  u.ruleset.ruleset_id = id;
  u.issued_at = issued_at;
  u.lifetime = lifetime;
  return u;
}

ExtensionCertificate ext_with(std::uint64_t serial, std::uint64_t target,
                              Tick extends, Tick fresh) {
  ExtensionCertificate e;
  e.serial = serial;
  e.target_serial = target;
  e.extends_expiry = extends;
  e.new_expiry = fresh;
  return e;
}

}  // namespace

TEST_CASE("signing appends to the transcript and advances the serial") {
  SignerDevice s = make_signer("alice");
  CHECK(s.next_serial == 1);

  auto r = approver_sign_update(s, update_with(1, 0, 10));
  REQUIRE(r.ok());
  const SignerDevice& after = r.value().signer;
  CHECK(after.next_serial == 2);
  REQUIRE(after.transcript.size() == 1);
  CHECK(after.transcript[0].serial == 1);
  CHECK(after.transcript[0].window_start == 0);
  CHECK(after.transcript[0].window_end == 10);
  CHECK(after.transcript[0].kind == ArtifactKind::Update);
  CHECK(verify_payload("alice", canonical_encode(update_with(1, 0, 10)),
                       r.value().signature));
}

TEST_CASE("re-signing the identical artifact is idempotent") {
  SignerDevice s = make_signer("alice");
  auto first = approver_sign_update(s, update_with(1, 0, 10));
  REQUIRE(first.ok());
  auto again = approver_sign_update(first.value().signer, update_with(1, 0, 10));
  REQUIRE(again.ok());
  CHECK(again.value().signature == first.value().signature);
  CHECK(again.value().signer.transcript.size() == 1);
  CHECK(again.value().signer.next_serial == 2);
}

TEST_CASE("a consumed serial never signs a different artifact") {
  SignerDevice s = make_signer("alice");
  auto first = approver_sign_update(s, update_with(1, 0, 10));
  REQUIRE(first.ok());

  SUBCASE("same serial, different lifetime") {
    auto r = approver_sign_update(first.value().signer, update_with(1, 0, 20));
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().code == ErrorCode::ConflictingWindow);
  }
  SUBCASE("same serial reused by an extension") {
    auto r = approver_sign_extension(first.value().signer, ext_with(1, 1, 10, 20));
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().code == ErrorCode::ConflictingWindow);
  }
}

TEST_CASE("serials below and above the stream cursor are refused") {
  SignerDevice s = make_signer("alice", 3);
  auto low = approver_sign_update(s, update_with(2, 0, 10));
  REQUIRE_FALSE(low.ok());
  CHECK(low.error().code == ErrorCode::SerialRegression);

  auto high = approver_sign_update(s, update_with(5, 0, 10));
  REQUIRE_FALSE(high.ok());
  CHECK(high.error().code == ErrorCode::SerialGap);

  auto exact = approver_sign_update(s, update_with(3, 0, 10));
  CHECK(exact.ok());
}

TEST_CASE("abutting windows sign cleanly, overlapping ones refuse") {
  SignerDevice s = make_signer("alice");
  auto r1 = approver_sign_update(s, update_with(1, 0, 10));
  REQUIRE(r1.ok());
  auto r2 = approver_sign_update(r1.value().signer, update_with(2, 10, 10));
  REQUIRE(r2.ok());
  auto r3 = approver_sign_update(r2.value().signer, update_with(3, 20, 10));
  REQUIRE(r3.ok());

  auto bad = approver_sign_update(r3.value().signer, update_with(4, 25, 10));
  REQUIRE_FALSE(bad.ok());
  CHECK(bad.error().code == ErrorCode::ConflictingWindow);
}

TEST_CASE("an empty validity window is refused") {
  SignerDevice s = make_signer("alice");
  auto r = approver_sign_update(s, update_with(1, 5, 0));
  REQUIRE_FALSE(r.ok());
  CHECK(r.error().code == ErrorCode::ConflictingWindow);

  auto e = approver_sign_extension(s, ext_with(1, 1, 10, 10));
  REQUIRE_FALSE(e.ok());
  CHECK(e.error().code == ErrorCode::ConflictingWindow);
}

TEST_CASE("extending the artifact an entry already declares is not a conflict") {
  SignerDevice s = make_signer("alice");
  auto r1 = approver_sign_update(s, update_with(1, 0, 10));
  REQUIRE(r1.ok());

  // Window [8, 20) overlaps the update's own [0, 10), but both declare
  // serial 1 live, so the discipline allows it.
  auto ok = approver_sign_extension(r1.value().signer, ext_with(2, 1, 8, 20));
  REQUIRE(ok.ok());
  CHECK(ok.value().signer.transcript.size() == 2);

  // A second extension overlapping [8, 20) but targeting a different
  // artifact is exactly the secret-extension move; the signer refuses.
  auto bad =
      approver_sign_extension(ok.value().signer, ext_with(3, 99, 15, 30));
  REQUIRE_FALSE(bad.ok());
  CHECK(bad.error().code == ErrorCode::ConflictingWindow);
}

TEST_CASE("two updates with identical bytes except the window conflict") {
  // The honest sequence: sign an update, then try to sign a successor
  // whose window starts before the first ends. The refusal is what forces
  // a public extension certificate instead of a quiet re-issue.
  SignerDevice s = make_signer("alice");
  auto r1 = approver_sign_update(s, update_with(1, 0, 100));
  REQUIRE(r1.ok());
  auto r2 = approver_sign_update(r1.value().signer, update_with(2, 50, 100));
  REQUIRE_FALSE(r2.ok());
  CHECK(r2.error().code == ErrorCode::ConflictingWindow);
}

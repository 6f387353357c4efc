#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hegsim/core/bytes.hpp"
#include "hegsim/core/digest.hpp"
#include "hegsim/core/fraction.hpp"
#include "hegsim/core/time.hpp"

namespace hegsim::protocol {

/// Workload categories a grant can cover. NonAI acts as a wildcard on the
/// workload side: a NonAI workload fits a grant of any class.
enum class WorkloadClass : std::uint8_t {
  Training = 0,
  FineTuning = 1,
  Inference = 2,
  NonAI = 3,
};

/// Unbounded limit sentinel. Encodes as the IEEE-754 +inf bit pattern.
inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// One permitted envelope: workloads of this class may run when every
/// magnitude is within the stated limit. irrevocable grants survive every
/// later ruleset change on a device that once held them.
struct CapabilityGrant {
  WorkloadClass workload_class = WorkloadClass::NonAI;
  double flop_limit = kUnbounded;
  double cluster_size_limit = kUnbounded;
  double bandwidth_limit = kUnbounded;
  bool irrevocable = false;

  friend bool operator==(const CapabilityGrant&, const CapabilityGrant&) = default;
};

struct Ruleset {
  std::string ruleset_id;
  std::vector<CapabilityGrant> grants;
  bool requires_license = false;

  friend bool operator==(const Ruleset&, const Ruleset&) = default;
};

/// How many approver signatures an update needs.
struct UpdateRule {
  enum class Kind : std::uint8_t { AllApprovers = 0, Threshold = 1 };
  Kind kind = Kind::AllApprovers;
  std::size_t k = 0;  // used when kind == Threshold

  friend bool operator==(const UpdateRule&, const UpdateRule&) = default;
};

/// Governance configuration shared by every device in an ecosystem.
struct ApproverPolicy {
  std::vector<std::string> approvers;  // ordered, unique
  UpdateRule update_rule;
  Fraction extension_fraction;  // quorum for lifetime extensions
  std::optional<Ruleset> baseline;  // fallback rules after expiry, if any
  bool ratchet_mode = false;  // installs must not reduce permissions
};

/// A signed ruleset update. lifetime and issued_at are logical ticks;
/// issued_at anchors the artifact's validity window for equivocation
/// accounting, while a device computes its own expiry from its local clock.
struct FirmwareUpdate {
  std::uint64_t serial = 0;
  std::uint64_t version = 0;
  Ruleset ruleset;
  Tick lifetime = 0;
  Tick issued_at = 0;
  std::map<std::string, Bytes> signatures;  // approver identity -> signature
};

/// Pushes the expiry of the update with target_serial out to new_expiry.
/// Carries its own serial: extensions and updates share one serial stream
/// per signer. extends_expiry records the expiry being replaced, which is
/// where this artifact's validity window begins.
struct ExtensionCertificate {
  std::uint64_t serial = 0;
  std::uint64_t target_serial = 0;
  Tick extends_expiry = 0;
  Tick new_expiry = 0;
  std::map<std::string, Bytes> signatures;
};

struct OperatingLicense {
  std::string device_id;
  Tick expiry = 0;
  std::string issuer;
  Bytes signature;
};

/// Signed, auditable refusal to renew licenses for the listed devices.
struct DenialRecord {
  std::string issuer;
  std::vector<std::string> device_ids;  // sorted
  Tick issued_at = 0;
  Bytes signature;
};

enum class Mode : std::uint8_t {
  Active = 0,
  BaselineFallback = 1,
  LockedDown = 2,
};

struct LocationConfig {
  std::vector<std::string> landmarks;
  double max_distance = 0.0;
};

/// A landmark's signed answer to a device's distance query.
struct LandmarkResponse {
  std::string landmark_id;
  std::string device_id;
  double distance = 0.0;
  Bytes signature;
};

struct InstalledFirmware {
  std::uint64_t serial = 0;
  std::uint64_t version = 0;
  Ruleset ruleset;  // effective grants, including carried irrevocable ones
  Tick expiry = 0;
};

/// Full state of one simulated guarantee processor. All transitions are
/// pure: operations take a state and return the successor.
struct DeviceState {
  std::string device_id;
  InstalledFirmware installed;
  Tick clock = 0;
  Mode mode = Mode::Active;
  std::uint64_t rollback_floor = 0;  // == installed.serial
  std::optional<OperatingLicense> license;
  std::optional<LocationConfig> location_config;
  std::optional<Ruleset> baseline;  // provisioned from policy at creation
  std::vector<PowerInterval> power_log;
  std::optional<Tick> powered_on_since;
};

/// What a transcript entry declares live: an update declares itself (by
/// payload digest), an extension declares whichever update it targets.
enum class ArtifactKind : std::uint8_t { Update = 0, Extension = 1 };

struct TranscriptEntry {
  ArtifactKind kind = ArtifactKind::Update;
  std::uint64_t serial = 0;
  Tick window_start = 0;
  Tick window_end = 0;  // half-open [start, end)
  Digest payload_digest{};  // canonical bytes, signatures excluded
  std::uint64_t designated_serial = 0;  // own serial / extension target
};

/// An approver's signing oracle. The transcript is append-only; serials
/// strictly increase; no two entries declare different artifacts live at
/// the same tick.
struct SignerDevice {
  std::string identity;
  std::string key;  // mock scheme: the key secret is the identity string
  std::uint64_t next_serial = 1;
  std::vector<TranscriptEntry> transcript;
};

struct Attestation {
  std::string device_id;
  std::uint64_t serial = 0;
  std::uint64_t version = 0;
  Tick clock = 0;
  Mode mode = Mode::Active;
  Bytes signature;
};

struct WorkloadDescriptor {
  WorkloadClass workload_class = WorkloadClass::NonAI;
  double total_flop = 0.0;
  double cluster_size = 1.0;
  double bandwidth = 0.0;
  bool authorized = false;  // workload carries a specific approval
};

enum class DenyReason : std::uint8_t {
  None = 0,
  LockedDown,
  NoMatchingGrant,
  FlopLimitExceeded,
  ClusterTooLarge,
  BandwidthTooHigh,
  LicenseMissingOrExpired,
};

struct WorkloadDecision {
  bool allowed = false;
  DenyReason reason = DenyReason::None;
};

std::string to_string(WorkloadClass c);
std::string to_string(Mode m);
std::string to_string(DenyReason r);
std::optional<WorkloadClass> workload_class_from_string(const std::string& s);
std::optional<Mode> mode_from_string(const std::string& s);

/// Input to equivocation scanning: anything an approver signs that declares
/// an artifact live over a window.
using SignedArtifact = std::variant<FirmwareUpdate, ExtensionCertificate>;

/// One offending pair. Indices refer to the scanned artifact list.
struct Conflict {
  std::string approver;
  std::size_t first = 0;
  std::size_t second = 0;
  bool duplicate_serial = false;
  bool window_overlap = false;
};

}  // namespace hegsim::protocol

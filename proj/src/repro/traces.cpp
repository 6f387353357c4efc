#include "hegsim/repro/traces.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "hegsim/core/rng.hpp"
#include "hegsim/protocol/device.hpp"
#include "hegsim/protocol/encode.hpp"
#include "hegsim/protocol/equivocation.hpp"
#include "hegsim/protocol/signature.hpp"
#include "hegsim/protocol/signer.hpp"
#include "hegsim/repro/oracles.hpp"

namespace hegsim::repro {

namespace {

namespace pr = hegsim::protocol;

const double kFlopPalette[] = {1e12, 1e15, 1e18, pr::kUnbounded};
const double kClusterPalette[] = {1, 8, 64, pr::kUnbounded};
const double kBandwidthPalette[] = {1e9, 1e11, pr::kUnbounded};
const pr::WorkloadClass kClassPalette[] = {
    pr::WorkloadClass::Training, pr::WorkloadClass::FineTuning,
    pr::WorkloadClass::Inference, pr::WorkloadClass::NonAI};

pr::CapabilityGrant random_grant(SplitMix64& rng) {
  pr::CapabilityGrant g;
  g.workload_class = kClassPalette[rng.bounded(4)];
  g.flop_limit = kFlopPalette[rng.bounded(4)];
  g.cluster_size_limit = kClusterPalette[rng.bounded(4)];
  g.bandwidth_limit = kBandwidthPalette[rng.bounded(3)];
  g.irrevocable = rng.bounded(100) < 15;
  return g;
}

pr::Ruleset random_ruleset(SplitMix64& rng, std::uint64_t tag) {
  pr::Ruleset rs;
  rs.ruleset_id = "rs" + std::to_string(tag);
  const std::size_t n = 1 + rng.bounded(3);
  for (std::size_t i = 0; i < n; ++i) rs.grants.push_back(random_grant(rng));
  return rs;
}

pr::WorkloadDescriptor random_workload(SplitMix64& rng) {
  pr::WorkloadDescriptor w;
  w.workload_class = kClassPalette[rng.bounded(4)];
  w.total_flop = kFlopPalette[rng.bounded(3)] * (1 + rng.bounded(3));
  w.cluster_size = static_cast<double>(1 + rng.bounded(100));
  w.bandwidth = kBandwidthPalette[rng.bounded(2)] * (1 + rng.bounded(2));
  w.authorized = rng.bounded(100) < 30;
  return w;
}

// The mini-model: a from-scratch restatement of the device rules used to
// cross-check every transition and decision the real module makes.

struct Mini {
  int mode = 0;  // 0 active, 1 fallback, 2 locked
  std::uint64_t serial = 1;
  Tick clock = 0;
  Tick expiry = 0;
  std::vector<pr::CapabilityGrant> grants;
  std::optional<std::vector<pr::CapabilityGrant>> baseline;
};

struct MiniDecision {
  bool allowed = false;
  pr::DenyReason reason = pr::DenyReason::None;
};

bool mini_grant_fits_class(const pr::WorkloadDescriptor& w,
                           const pr::CapabilityGrant& g) {
  if (w.workload_class == pr::WorkloadClass::NonAI) return true;
  return w.workload_class == g.workload_class;
}

pr::DenyReason mini_limit_check(const pr::WorkloadDescriptor& w,
                                const pr::CapabilityGrant& g, bool escape) {
  bool flop_ok = !(w.total_flop > g.flop_limit);
  if (escape && w.authorized &&
      w.workload_class == pr::WorkloadClass::Training) {
    flop_ok = true;
  }
  if (!flop_ok) return pr::DenyReason::FlopLimitExceeded;
  if (w.cluster_size > g.cluster_size_limit) {
    return pr::DenyReason::ClusterTooLarge;
  }
  if (w.bandwidth > g.bandwidth_limit) return pr::DenyReason::BandwidthTooHigh;
  return pr::DenyReason::None;
}

MiniDecision mini_scan(const pr::WorkloadDescriptor& w,
                       const std::vector<pr::CapabilityGrant>& grants,
                       bool escape) {
  int first_fit = -1;
  for (std::size_t i = 0; i < grants.size(); ++i) {
    if (!mini_grant_fits_class(w, grants[i])) continue;
    if (first_fit < 0) first_fit = static_cast<int>(i);
    if (mini_limit_check(w, grants[i], escape) == pr::DenyReason::None) {
      return MiniDecision{true, pr::DenyReason::None};
    }
  }
  if (first_fit < 0) {
    return MiniDecision{false, pr::DenyReason::NoMatchingGrant};
  }
  return MiniDecision{
      false, mini_limit_check(w, grants[static_cast<std::size_t>(first_fit)],
                              escape)};
}

MiniDecision mini_decide(const Mini& m, const pr::WorkloadDescriptor& w) {
  if (m.mode == 2) return MiniDecision{false, pr::DenyReason::LockedDown};
  if (m.mode == 1) {
    if (!m.baseline) {
      return MiniDecision{false, pr::DenyReason::NoMatchingGrant};
    }
    return mini_scan(w, *m.baseline, false);
  }
  return mini_scan(w, m.grants, true);
}

// Smallest r with r/n >= num/den, found by search instead of arithmetic.
std::size_t mini_required(const Fraction& f, std::size_t n) {
  if (f.den == 0) return n + 1;
  for (std::size_t r = 0; r <= n; ++r) {
    if (r * f.den >= f.num * n) return r;
  }
  return n + 1;
}

std::size_t overlap_count(const std::set<std::string>& who,
                          const std::vector<std::string>& approvers) {
  std::size_t have = 0;
  for (const auto& a : approvers) have += who.count(a);
  return have;
}

bool mini_quorum(const pr::ApproverPolicy& policy,
                 const std::set<std::string>& who) {
  if (policy.update_rule.kind == pr::UpdateRule::Kind::AllApprovers) {
    for (const auto& a : policy.approvers) {
      if (!who.count(a)) return false;
    }
    return true;
  }
  return overlap_count(who, policy.approvers) >= policy.update_rule.k;
}

void mini_advance(Mini& m, Tick dt) {
  if (dt > 0) m.clock += dt;
  if (m.mode == 0 && m.clock >= m.expiry) m.mode = m.baseline ? 1 : 2;
}

struct Trace {
  pr::ApproverPolicy policy;
  pr::DeviceState device;
  Mini mini;
  std::map<std::string, pr::SignerDevice> signers;
  std::uint64_t next_serial = 2;
  Tick frontier = 0;
  std::uint64_t frontier_owner = 1;
  std::vector<pr::FirmwareUpdate> updates;
  std::vector<std::set<std::string>> update_signers;
  std::vector<pr::SignedArtifact> artifacts;
  std::uint64_t last_installed = 1;
  bool ever_locked = false;
};

Trace make_trace(SplitMix64& rng) {
  Trace t;
  const std::size_t n_approvers = 1 + rng.bounded(3);
  const char* names[] = {"A", "B", "C"};
  for (std::size_t i = 0; i < n_approvers; ++i) {
    t.policy.approvers.push_back(names[i]);
  }
  if (rng.bounded(2) == 0) {
    t.policy.update_rule.kind = pr::UpdateRule::Kind::AllApprovers;
  } else {
    t.policy.update_rule.kind = pr::UpdateRule::Kind::Threshold;
    t.policy.update_rule.k = 1 + rng.bounded(n_approvers);
  }
  t.policy.extension_fraction = majority_of(n_approvers);
  if (rng.bounded(2) == 0) {
    pr::Ruleset base;
    base.ruleset_id = "baseline";
    pr::CapabilityGrant everyday;
    everyday.workload_class = pr::WorkloadClass::NonAI;
    everyday.flop_limit = 1e12;
    everyday.cluster_size_limit = 4;
    everyday.bandwidth_limit = 1e9;
    base.grants.push_back(everyday);
    t.policy.baseline = base;
  }

  pr::InstalledFirmware initial;
  initial.serial = 1;
  initial.version = 1;
  initial.ruleset = random_ruleset(rng, 1);
  initial.expiry = 5 + static_cast<Tick>(rng.bounded(26));
  t.frontier = initial.expiry;
  t.mini.expiry = initial.expiry;
  t.mini.grants = initial.ruleset.grants;
  if (t.policy.baseline) t.mini.baseline = t.policy.baseline->grants;
  t.device = pr::make_device("dut", initial, t.policy.baseline, std::nullopt);

  for (const auto& a : t.policy.approvers) {
    t.signers.emplace(a, pr::make_signer(a, 2));
  }
  return t;
}

std::set<std::string> pick_signers(SplitMix64& rng, const Trace& t) {
  std::set<std::string> who;
  if (rng.bounded(10) < 7) {
    who.insert(t.policy.approvers.begin(), t.policy.approvers.end());
    return who;
  }
  while (who.empty()) {
    for (const auto& a : t.policy.approvers) {
      if (rng.bounded(2) == 0) who.insert(a);
    }
  }
  return who;
}

// Returns an empty string on success; honest signing must never refuse.
template <class Artifact, class SignFn>
std::string sign_honestly(Trace& t, Artifact& artifact, std::uint64_t serial,
                          const std::set<std::string>& who, SignFn sign_fn) {
  for (const auto& id : who) {
    pr::SignerDevice& signer = t.signers.at(id);
    if (signer.next_serial < serial) signer.next_serial = serial;
    auto out = sign_fn(signer, artifact);
    if (!out.ok()) {
      return "honest sign refused for " + id + ": " +
             std::string(to_string(out.error().code)) + " " +
             out.error().detail;
    }
    t.signers.at(id) = out.value().signer;
    artifact.signatures[id] = out.value().signature;
  }
  return "";
}

std::optional<std::string> check_state(const Trace& t, const char* where) {
  const auto& d = t.device;
  const int impl_mode = static_cast<int>(d.mode);
  if (impl_mode != t.mini.mode) {
    return std::string(where) + ": mode " + std::to_string(impl_mode) +
           " expected " + std::to_string(t.mini.mode);
  }
  if (d.installed.serial != t.mini.serial) {
    return std::string(where) + ": serial " +
           std::to_string(d.installed.serial) + " expected " +
           std::to_string(t.mini.serial);
  }
  if (d.clock != t.mini.clock) {
    return std::string(where) + ": clock " + std::to_string(d.clock) +
           " expected " + std::to_string(t.mini.clock);
  }
  if (d.installed.expiry != t.mini.expiry) {
    return std::string(where) + ": expiry " +
           std::to_string(d.installed.expiry) + " expected " +
           std::to_string(t.mini.expiry);
  }
  if (d.rollback_floor != d.installed.serial) {
    return std::string(where) + ": rollback floor " +
           std::to_string(d.rollback_floor) + " detached from serial";
  }
  if (t.ever_locked && d.mode != pr::Mode::LockedDown) {
    return std::string(where) + ": lockdown was not absorbing";
  }
  return std::nullopt;
}

std::optional<std::string> do_advance(Trace& t, Tick dt) {
  t.device = pr::advance_clock(std::move(t.device), dt);
  mini_advance(t.mini, dt);
  return check_state(t, "advance");
}

std::optional<std::string> do_install(Trace& t, const pr::FirmwareUpdate& u,
                                      const std::set<std::string>& who) {
  bool expect = t.mini.mode != 2 && mini_quorum(t.policy, who) &&
                u.serial > t.mini.serial;
  auto result = pr::install_update(t.device, u, t.policy);
  if (result.ok() != expect) {
    return "install acceptance mismatch: got " +
           std::string(result.ok() ? "accepted" : "refused") + " for serial " +
           std::to_string(u.serial);
  }
  if (result.ok()) {
    if (u.serial <= t.last_installed) {
      return "installed serial " + std::to_string(u.serial) +
             " not above previous " + std::to_string(t.last_installed);
    }
    t.last_installed = u.serial;
    t.device = result.value();
    std::vector<pr::CapabilityGrant> next = u.ruleset.grants;
    for (const auto& g : t.mini.grants) {
      if (g.irrevocable &&
          std::find(next.begin(), next.end(), g) == next.end()) {
        next.push_back(g);
      }
    }
    t.mini.grants = std::move(next);
    t.mini.serial = u.serial;
    t.mini.expiry = t.mini.clock + u.lifetime;
    t.mini.mode = 0;
  }
  return check_state(t, "install");
}

std::optional<std::string> do_honest_update(Trace& t, SplitMix64& rng) {
  pr::FirmwareUpdate u;
  u.serial = t.next_serial++;
  u.version = u.serial;
  u.ruleset = random_ruleset(rng, u.serial);
  u.lifetime = 5 + static_cast<Tick>(rng.bounded(26));
  u.issued_at = t.frontier;
  t.frontier = u.issued_at + u.lifetime;
  t.frontier_owner = u.serial;

  const std::set<std::string> who = pick_signers(rng, t);
  std::string err = sign_honestly(t, u, u.serial, who,
                                  [](pr::SignerDevice& s,
                                     const pr::FirmwareUpdate& a) {
                                    return pr::approver_sign_update(s, a);
                                  });
  if (!err.empty()) return err;
  t.updates.push_back(u);
  t.update_signers.push_back(who);
  t.artifacts.push_back(u);
  return do_install(t, u, who);
}

std::optional<std::string> do_rollback_attempt(Trace& t, SplitMix64& rng) {
  if (t.updates.empty()) return do_advance(t, 1 + rng.bounded(5));
  const std::size_t pick = rng.bounded(t.updates.size());
  return do_install(t, t.updates[pick], t.update_signers[pick]);
}

std::optional<std::string> do_extension(Trace& t, SplitMix64& rng) {
  pr::ExtensionCertificate ext;
  ext.serial = t.next_serial++;
  ext.target_serial =
      rng.bounded(2) == 0 ? t.frontier_owner : t.device.installed.serial;
  ext.extends_expiry = t.frontier;
  ext.new_expiry = std::max(t.frontier, t.device.installed.expiry) + 1 +
                   static_cast<Tick>(rng.bounded(10));
  t.frontier = ext.new_expiry;
  t.frontier_owner = ext.target_serial;

  const std::set<std::string> who = pick_signers(rng, t);
  std::string err = sign_honestly(t, ext, ext.serial, who,
                                  [](pr::SignerDevice& s,
                                     const pr::ExtensionCertificate& a) {
                                    return pr::approver_sign_extension(s, a);
                                  });
  if (!err.empty()) return err;
  t.artifacts.push_back(ext);

  const std::size_t required =
      mini_required(t.policy.extension_fraction, t.policy.approvers.size());
  const bool expect = t.mini.mode == 0 &&
                      ext.target_serial == t.mini.serial &&
                      ext.new_expiry > t.mini.expiry &&
                      overlap_count(who, t.policy.approvers) >= required;
  auto result = pr::extend_lifetime(t.device, ext, t.policy);
  if (result.ok() != expect) {
    return "extension acceptance mismatch: got " +
           std::string(result.ok() ? "accepted" : "refused") + " for target " +
           std::to_string(ext.target_serial);
  }
  if (result.ok()) {
    t.device = result.value();
    t.mini.expiry = ext.new_expiry;
  }
  return check_state(t, "extend");
}

std::optional<std::string> do_workload(Trace& t, SplitMix64& rng) {
  const pr::WorkloadDescriptor w = random_workload(rng);
  const pr::WorkloadDecision got = pr::evaluate_workload(t.device, w);
  const MiniDecision want = mini_decide(t.mini, w);
  if (got.allowed != want.allowed || got.reason != want.reason) {
    return "workload decision mismatch: got " +
           std::string(got.allowed ? "allow" : "deny") + "/" +
           pr::to_string(got.reason) + " expected " +
           std::string(want.allowed ? "allow" : "deny") + "/" +
           pr::to_string(want.reason);
  }
  return std::nullopt;
}

struct TraceOutcome {
  std::size_t events = 0;
  std::optional<std::string> violation;
  std::vector<pr::SignedArtifact> artifacts;
};

TraceOutcome run_one_trace(std::uint64_t trace_seed, std::size_t max_events,
                           bool collect) {
  SplitMix64 rng(trace_seed);
  Trace t = make_trace(rng);
  TraceOutcome out;
  const std::size_t n_events =
      std::min<std::size_t>(max_events, 10 + rng.bounded(91));
  for (std::size_t e = 0; e < n_events; ++e) {
    ++out.events;
    std::optional<std::string> violation;
    switch (rng.bounded(12)) {
      case 0:
      case 1:
      case 2:
        violation = do_advance(t, 1 + static_cast<Tick>(rng.bounded(10)));
        break;
      case 3: {
        Tick dt = 1 + static_cast<Tick>(rng.bounded(5));
        if (t.device.installed.expiry > t.device.clock) {
          dt += t.device.installed.expiry - t.device.clock;
        }
        violation = do_advance(t, dt);
        break;
      }
      case 4:
      case 5:
      case 6:
        violation = do_honest_update(t, rng);
        break;
      case 7:
        violation = do_rollback_attempt(t, rng);
        break;
      case 8:
      case 9:
        violation = do_extension(t, rng);
        break;
      default:
        violation = do_workload(t, rng);
        break;
    }
    if (t.device.mode == pr::Mode::LockedDown) t.ever_locked = true;
    if (violation) {
      out.violation = "event " + std::to_string(e) + ": " + *violation;
      break;
    }
  }
  if (collect) out.artifacts = std::move(t.artifacts);
  return out;
}

}  // namespace

TraceSuiteResult run_trace_suite(std::uint64_t seed, std::size_t n_traces,
                                 std::size_t max_events) {
  TraceSuiteResult r;
  for (std::size_t i = 0; i < n_traces; ++i) {
    TraceOutcome out = run_one_trace(derive_seed(seed, i), max_events, false);
    ++r.traces;
    r.events += out.events;
    if (out.violation) {
      ++r.violations;
      if (r.first_violation.empty()) {
        r.first_violation = "trace " + std::to_string(i) + ", " +
                            *out.violation;
      }
    }
  }
  return r;
}

HonestScanResult scan_honest_traces(std::uint64_t seed, std::size_t n_traces,
                                    std::size_t max_events) {
  HonestScanResult r;
  for (std::size_t i = 0; i < n_traces; ++i) {
    TraceOutcome out = run_one_trace(derive_seed(seed, i), max_events, true);
    ++r.traces;
    r.artifacts += out.artifacts.size();
    const auto conflicts = pr::detect_equivocation(out.artifacts);
    if (!conflicts.empty()) {
      r.conflicts += conflicts.size();
      if (r.detail.empty()) {
        r.detail = "trace " + std::to_string(i) + ": " +
                   std::to_string(conflicts.size()) +
                   " conflicts from honest signers";
      }
    }
  }
  return r;
}

AdversarialCompareResult compare_adversarial_sets(std::uint64_t seed,
                                                  std::size_t n_sets,
                                                  std::size_t max_artifacts) {
  AdversarialCompareResult r;
  const char* pool[] = {"alice", "bob", "carol"};
  for (std::size_t s = 0; s < n_sets; ++s) {
    SplitMix64 rng(derive_seed(seed, s));
    const std::size_t n = 2 + rng.bounded(max_artifacts - 1);
    std::vector<pr::SignedArtifact> arts;
    for (std::size_t k = 0; k < n; ++k) {
      pr::SignedArtifact art;
      if (k > 0 && rng.bounded(100) < 15) {
        art = arts[rng.bounded(k)];  // retransmission of an earlier artifact
        std::visit([](auto& a) { a.signatures.clear(); }, art);
      } else if (rng.bounded(2) == 0) {
        pr::FirmwareUpdate u;
        u.serial = 1 + rng.bounded(4);
        u.version = 1 + rng.bounded(3);
        u.ruleset = random_ruleset(rng, rng.bounded(1000));
        u.lifetime = static_cast<Tick>(rng.bounded(12));  // 0 = empty window
        u.issued_at = static_cast<Tick>(rng.bounded(20));
        art = u;
      } else {
        pr::ExtensionCertificate e;
        e.serial = 1 + rng.bounded(4);
        e.target_serial = 1 + rng.bounded(4);
        e.extends_expiry = static_cast<Tick>(rng.bounded(16));
        e.new_expiry = e.extends_expiry + static_cast<Tick>(rng.bounded(10));
        art = e;
      }
      const Bytes payload = std::visit(
          [](const auto& a) { return pr::canonical_encode(a); }, art);
      std::visit(
          [&](auto& a) {
            for (const char* id : pool) {
              const auto roll = rng.bounded(100);
              if (roll < 55) {
                a.signatures[id] = pr::sign_payload(id, payload);
              } else if (roll < 70) {
                // wrong-key forgery; must not attribute the artifact
                a.signatures[id] = pr::sign_payload("mallory", payload);
              }
            }
          },
          art);
      arts.push_back(std::move(art));
    }

    const auto got = pr::detect_equivocation(arts);
    const auto want = naive_detect(arts);
    bool same = got.size() == want.size();
    for (std::size_t i = 0; same && i < got.size(); ++i) {
      same = got[i].approver == want[i].approver &&
             got[i].first == want[i].first && got[i].second == want[i].second &&
             got[i].duplicate_serial == want[i].duplicate_serial &&
             got[i].window_overlap == want[i].window_overlap;
    }
    ++r.sets;
    if (same) {
      r.conflicts += got.size();
    } else {
      ++r.mismatches;
      if (r.detail.empty()) {
        r.detail = "set " + std::to_string(s) + ": detector found " +
                   std::to_string(got.size()) + " conflicts, reference " +
                   std::to_string(want.size());
      }
    }
  }
  return r;
}

}  // namespace hegsim::repro

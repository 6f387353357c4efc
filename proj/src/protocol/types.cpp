#include "hegsim/protocol/types.hpp"

namespace hegsim::protocol {

std::string to_string(WorkloadClass c) {
  switch (c) {
    case WorkloadClass::Training: return "training";
    case WorkloadClass::FineTuning: return "fine_tuning";
    case WorkloadClass::Inference: return "inference";
    case WorkloadClass::NonAI: return "non_ai";
  }
  return "unknown";
}

std::string to_string(Mode m) {
  switch (m) {
    case Mode::Active: return "active";
    case Mode::BaselineFallback: return "baseline_fallback";
    case Mode::LockedDown: return "locked_down";
  }
  return "unknown";
}

std::string to_string(DenyReason r) {
  switch (r) {
    case DenyReason::None: return "none";
    case DenyReason::LockedDown: return "locked_down";
    case DenyReason::NoMatchingGrant: return "no_matching_grant";
    case DenyReason::FlopLimitExceeded: return "flop_limit_exceeded";
    case DenyReason::ClusterTooLarge: return "cluster_too_large";
    case DenyReason::BandwidthTooHigh: return "bandwidth_too_high";
    case DenyReason::LicenseMissingOrExpired: return "license_missing_or_expired";
  }
  return "unknown";
}

std::optional<WorkloadClass> workload_class_from_string(const std::string& s) {
  if (s == "training") return WorkloadClass::Training;
  if (s == "fine_tuning") return WorkloadClass::FineTuning;
  if (s == "inference") return WorkloadClass::Inference;
  if (s == "non_ai") return WorkloadClass::NonAI;
  return std::nullopt;
}

std::optional<Mode> mode_from_string(const std::string& s) {
  if (s == "active") return Mode::Active;
  if (s == "baseline_fallback") return Mode::BaselineFallback;
  if (s == "locked_down") return Mode::LockedDown;
  return std::nullopt;
}

}  // namespace hegsim::protocol

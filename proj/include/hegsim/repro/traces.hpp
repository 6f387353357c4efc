#pragma once

#include <cstdint>
#include <string>

namespace hegsim::repro {

/// Randomized protocol traces checked event by event against a separately
/// written mini-model. A violation is any disagreement on state or on a
/// workload decision, or a broken trace invariant (serial monotonicity,
/// lockdown absorption, post-expiry allows outside the baseline).
struct TraceSuiteResult {
  std::size_t traces = 0;
  std::size_t events = 0;
  std::size_t violations = 0;
  std::string first_violation;
};

TraceSuiteResult run_trace_suite(std::uint64_t seed, std::size_t n_traces,
                                 std::size_t max_events);

/// Replays the same traces, feeding everything their transcript-disciplined
/// signers produced to the equivocation detector. Honest signing must come
/// back clean every time.
struct HonestScanResult {
  std::size_t traces = 0;
  std::size_t artifacts = 0;
  std::size_t conflicts = 0;
  std::string detail;
};

HonestScanResult scan_honest_traces(std::uint64_t seed, std::size_t n_traces,
                                    std::size_t max_events);

/// Adversarial artifact piles (forged, cloned, serial-reusing, window
///-overlapping, some with invalid signatures) thrown at both the production
/// detector and the quadratic reference; outputs must match exactly.
struct AdversarialCompareResult {
  std::size_t sets = 0;
  std::size_t conflicts = 0;  // agreed-on conflict count, for the record
  std::size_t mismatches = 0;
  std::string detail;
};

AdversarialCompareResult compare_adversarial_sets(std::uint64_t seed,
                                                  std::size_t n_sets,
                                                  std::size_t max_artifacts);

}  // namespace hegsim::repro

#pragma once

#include <cstdint>
#include <vector>

#include "hegsim/core/rng.hpp"
#include "hegsim/oversight/types.hpp"

namespace hegsim::oversight {

/// Probability that at least one of n independently hidden devices is
/// caught when each finished device is sampled with probability p:
/// 1 - (1-p)^n. Throws std::invalid_argument outside p in [0,1].
double detection_probability(double p, std::uint64_t n);

/// Independent Bernoulli(p) sample of {0..N-1}, ascending.
std::vector<std::size_t> sample_population(SplitMix64& rng, std::size_t N,
                                           double p);

/// Fraction of trials in which sampling catches at least one compromised
/// device. Trial i draws its stream from derive_seed(master_seed, i), so
/// trials are independent and the whole estimate is reproducible.
double simulate_batch_smuggling(std::uint64_t master_seed,
                                const BatchScenario& scenario,
                                std::size_t trials);

/// Uniformly random balanced assignment of devices to customers: a uniform
/// shuffle dealt round-robin. Entry i is the customer receiving device i.
std::vector<std::size_t> assign_randomly(SplitMix64& rng,
                                         std::size_t n_devices,
                                         std::size_t customers);

}  // namespace hegsim::oversight

#include "hegsim/oversight/sampling.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hegsim::oversight {

double detection_probability(double p, std::uint64_t n) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("sampling rate must be in [0,1]");
  }
  if (n == 0) return 0.0;
  return 1.0 - std::pow(1.0 - p, static_cast<double>(n));
}

std::vector<std::size_t> sample_population(SplitMix64& rng, std::size_t N,
                                           double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("sampling rate must be in [0,1]");
  }
  std::vector<std::size_t> sampled;
  for (std::size_t i = 0; i < N; ++i) {
    if (rng.bernoulli(p)) sampled.push_back(i);
  }
  return sampled;
}

double simulate_batch_smuggling(std::uint64_t master_seed,
                                const BatchScenario& scenario,
                                std::size_t trials) {
  if (trials == 0) throw std::invalid_argument("trials must be >= 1");
  if (scenario.compromised > scenario.population) {
    throw std::invalid_argument("compromised count exceeds population");
  }
  // Sampling is independent per device, so only the compromised devices
  // can trigger detection; draws for the clean remainder are skipped.
  std::size_t caught = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    SplitMix64 rng(derive_seed(master_seed, t));
    for (std::size_t i = 0; i < scenario.compromised; ++i) {
      if (rng.bernoulli(scenario.sampling_rate)) {
        ++caught;
        break;
      }
    }
  }
  return static_cast<double>(caught) / static_cast<double>(trials);
}

std::vector<std::size_t> assign_randomly(SplitMix64& rng,
                                         std::size_t n_devices,
                                         std::size_t customers) {
  if (customers == 0) throw std::invalid_argument("customers must be >= 1");
  std::vector<std::size_t> order(n_devices);
  std::iota(order.begin(), order.end(), 0);
  // Fisher-Yates with the library generator, not std::shuffle: the result
  // must be identical across standard library implementations.
  for (std::size_t i = n_devices; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.bounded(i));
    std::swap(order[i - 1], order[j]);
  }
  std::vector<std::size_t> assignment(n_devices);
  for (std::size_t pos = 0; pos < n_devices; ++pos) {
    assignment[order[pos]] = pos % customers;
  }
  return assignment;
}

}  // namespace hegsim::oversight

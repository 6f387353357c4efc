#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hegsim/protocol/types.hpp"

namespace hegsim::repro {

/// Quadratic reference detector: inspects every same-approver artifact
/// pair directly, with none of the grouping or sweeping the production
/// detector uses. The two routes must agree exactly.
std::vector<protocol::Conflict> naive_detect(
    const std::vector<protocol::SignedArtifact>& artifacts);

/// Exact probability that customer 0 receives every one of the first
/// `compromised` devices under a uniform balanced deal of `population`
/// devices among `customers`, by exhaustive enumeration of customer 0's
/// share. Returned as (favorable, total) subset counts. population must be
/// small (enumeration is 2^population) and divisible by customers.
std::pair<std::uint64_t, std::uint64_t> enumerate_fixed_customer(
    std::size_t population, std::size_t compromised, std::size_t customers);

/// Half-width of the three-sigma binomial confidence band around
/// probability p after `trials` draws.
double three_sigma_band(double p, std::size_t trials);

}  // namespace hegsim::repro

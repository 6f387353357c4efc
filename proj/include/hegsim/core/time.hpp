#pragma once

#include <cstdint>

namespace hegsim {

/// Simulation time. One tick is an abstract unit (a day at the default
/// scenario scale); all lifetimes and expiries are tick counts.
using Tick = std::int64_t;

/// Half-open interval [start, end) during which a device drew power.
struct PowerInterval {
  Tick start = 0;
  Tick end = 0;

  Tick duration() const { return end > start ? end - start : 0; }
};

}  // namespace hegsim

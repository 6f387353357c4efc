#pragma once

#include <cstddef>
#include <cstdint>

namespace hegsim {

/// Exact rational threshold for quorum rules. Kept as integers so
/// "2/3 of 3 approvers" is exactly 2, never 1.9999... rounded the wrong way.
struct Fraction {
  std::uint32_t num = 1;
  std::uint32_t den = 2;

  /// Smallest k with k >= num/den * n, i.e. ceil(num*n/den).
  std::size_t required_count(std::size_t n) const {
    if (den == 0) return n + 1;  // unsatisfiable
    const std::uint64_t prod = static_cast<std::uint64_t>(num) * n;
    return static_cast<std::size_t>((prod + den - 1) / den);
  }

  bool satisfied(std::size_t have, std::size_t n) const {
    return have >= required_count(n);
  }
};

/// Strict majority of n as an exact fraction: ceil((n+1)/2) over n.
inline Fraction majority_of(std::size_t n) {
  if (n == 0) return Fraction{1, 1};
  return Fraction{static_cast<std::uint32_t>(n / 2 + 1),
                  static_cast<std::uint32_t>(n)};
}

}  // namespace hegsim

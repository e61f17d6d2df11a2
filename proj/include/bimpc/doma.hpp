#pragma once

#include <cstdint>
#include <vector>

#include "bimpc/bits.hpp"

namespace bimpc {

// Element-wise AND of l bit vectors from ordinary integer addition alone:
// with s = sum of the inputs, every entry satisfies s[i] in [0, l], the AND
// is 1 exactly where s[i] = l, and writing m = s mod l, d = (s - m) / l
// recovers it without any comparison. A dot product is the l = 2 case
// summed: dot(a, b) = sum_i ((a[i]+b[i]) - ((a[i]+b[i]) mod 2)) / 2.

/// Intermediate values of the addition-based AND.
struct DomaDecomposition {
  std::vector<std::uint32_t> elementwise_sum;   // s, entries in [0, l]
  std::vector<std::uint32_t> remainder;         // m = s mod l
  BitVector conjunction;                        // d = (s - m) / l
};

/// AND of inputs.size() >= 2 equal-length bit vectors via add/mod/divide.
DomaDecomposition and_via_modadd(const std::vector<BitVector>& inputs);

/// Binary dot product via the two-vector decomposition, summed over entries.
std::uint64_t dot_via_modadd(const BitVector& a, const BitVector& b);

/// Independent reference: multiply-and-accumulate, no decomposition.
std::uint64_t brute_force_dot(const BitVector& a, const BitVector& b);

}  // namespace bimpc

#pragma once

#include <cstdint>
#include <string_view>

namespace bimpc {

// All deterministic randomness in the simulator comes from splitmix64 run in
// counter mode: block i of a stream keyed by k is mix(k + (i+1) * GAMMA).
// The generator is fixed here so transcripts replay identically across
// platforms and build configurations.
inline constexpr std::string_view kGeneratorName = "splitmix64ctr";

inline constexpr std::uint64_t kSplitMixGamma = 0x9E3779B97F4A7C15ull;

inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Block `counter` of the stream keyed by `key`.
inline std::uint64_t splitmix64_block(std::uint64_t key,
                                      std::uint64_t counter) {
  return splitmix64_mix(key + (counter + 1) * kSplitMixGamma);
}

/// FNV-1a over arbitrary bytes; used to turn stream labels into keys.
inline std::uint64_t fnv1a64(std::string_view bytes,
                             std::uint64_t seed = 0xCBF29CE484222325ull) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

}  // namespace bimpc

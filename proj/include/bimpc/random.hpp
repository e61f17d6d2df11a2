#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "bimpc/prg.hpp"

namespace bimpc {

/// Source of fixed-width unbiased blocks, the only interface rejection
/// sampling draws from.
class RandomStream {
 public:
  virtual ~RandomStream() = default;

  /// Next block of `bits` bits (1..64), uniform and independent.
  virtual std::uint64_t draw_block(unsigned bits) = 0;
};

/// Deterministic stream: splitmix64 in counter mode under a fixed key.
class SeededStream final : public RandomStream {
 public:
  explicit SeededStream(std::uint64_t key) : key_(key) {}

  std::uint64_t draw_block(unsigned bits) override;

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Replays an explicit list of blocks; throws EnumerationError on underrun.
/// Audit enumeration uses this to feed exact raw randomness to the sampler.
class EnumeratedStream final : public RandomStream {
 public:
  explicit EnumeratedStream(std::vector<std::uint64_t> blocks)
      : blocks_(std::move(blocks)) {}

  std::uint64_t draw_block(unsigned bits) override;

  std::size_t consumed() const { return next_; }

 private:
  std::vector<std::uint64_t> blocks_;
  std::size_t next_ = 0;
};

}  // namespace bimpc

#include "bimpc/random.hpp"

#include "bimpc/errors.hpp"

namespace bimpc {

namespace {

std::uint64_t mask_low(std::uint64_t block, unsigned bits) {
  if (bits >= 64) return block;
  return block & ((std::uint64_t{1} << bits) - 1);
}

}  // namespace

std::uint64_t SeededStream::draw_block(unsigned bits) {
  if (bits == 0 || bits > 64) {
    throw ConfigError("block width must be 1..64 bits");
  }
  return mask_low(splitmix64_block(key_, counter_++), bits);
}

std::uint64_t EnumeratedStream::draw_block(unsigned bits) {
  if (bits == 0 || bits > 64) {
    throw ConfigError("block width must be 1..64 bits");
  }
  if (next_ >= blocks_.size()) {
    throw EnumerationError("deterministic stream exhausted");
  }
  std::uint64_t block = blocks_[next_++];
  if (block != mask_low(block, bits)) {
    throw EnumerationError("injected block wider than requested");
  }
  return block;
}

}  // namespace bimpc

#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "bimpc/errors.hpp"

namespace bimpc {

/// Vector over {0,1}; the clients' input domain.
class BitVector {
 public:
  BitVector() = default;

  explicit BitVector(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (std::uint8_t b : bits_) {
      if (b > 1) throw InputError("bit entries must be 0 or 1");
    }
  }

  BitVector(std::initializer_list<int> bits) {
    bits_.reserve(bits.size());
    for (int b : bits) {
      if (b != 0 && b != 1) throw InputError("bit entries must be 0 or 1");
      bits_.push_back(static_cast<std::uint8_t>(b));
    }
  }

  static BitVector zeros(std::size_t n) {
    return BitVector(std::vector<std::uint8_t>(n, 0));
  }

  std::size_t size() const { return bits_.size(); }

  std::uint8_t at(std::size_t i) const {
    if (i >= bits_.size()) throw InputError("bit index out of range");
    return bits_[i];
  }

  void set(std::size_t i, std::uint8_t value) {
    if (i >= bits_.size()) throw InputError("bit index out of range");
    if (value > 1) throw InputError("bit entries must be 0 or 1");
    bits_[i] = value;
  }

  /// Element-wise XOR; lengths must match.
  BitVector operator^(const BitVector& o) const {
    if (bits_.size() != o.bits_.size()) {
      throw InputError("bit vector length mismatch");
    }
    BitVector out = *this;
    for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] ^= o.bits_[i];
    return out;
  }

  std::uint64_t weight() const {
    std::uint64_t w = 0;
    for (std::uint8_t b : bits_) w += b;
    return w;
  }

  const std::vector<std::uint8_t>& bits() const { return bits_; }

  std::string to_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (std::uint8_t b : bits_) s.push_back(b ? '1' : '0');
    return s;
  }

  bool operator==(const BitVector& o) const = default;

 private:
  std::vector<std::uint8_t> bits_;
};

}  // namespace bimpc

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bimpc/random.hpp"

namespace bimpc {

/// Largest supported modulus is 2^31 - 1 so products fit in 64 bits.
inline constexpr std::uint64_t kMaxModulus = (std::uint64_t{1} << 31) - 1;

bool is_prime(std::uint64_t n);

/// Smallest prime strictly greater than n.
std::uint32_t smallest_prime_above(std::uint64_t n);

/// Throws ConfigError unless q is an odd prime in range (so 2 is invertible).
void validate_modulus(std::uint32_t q);

/// Bits needed to cover residues 0..q-1, i.e. ceil(log2 q).
unsigned field_bit_width(std::uint32_t q);

/// Serialized width of one residue: ceil(bits / 8) bytes, fixed per modulus.
unsigned field_byte_width(std::uint32_t q);

std::uint32_t mod_add(std::uint32_t x, std::uint32_t y, std::uint32_t q);
std::uint32_t mod_sub(std::uint32_t x, std::uint32_t y, std::uint32_t q);
std::uint32_t mod_mul(std::uint32_t x, std::uint32_t y, std::uint32_t q);

/// Multiplicative inverse by extended Euclid; x = 0 is a domain error.
std::uint32_t mod_inv(std::uint32_t x, std::uint32_t q);

/// One residue in Z_q. Carries its modulus; mixing moduli is a ConfigError.
class FieldElement {
 public:
  FieldElement(std::uint64_t value, std::uint32_t modulus);

  std::uint32_t value() const { return value_; }
  std::uint32_t modulus() const { return modulus_; }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement inverse() const;

  bool operator==(const FieldElement& o) const = default;

 private:
  std::uint32_t value_;
  std::uint32_t modulus_;
};

/// Fixed-length vector of residues sharing one modulus.
class FieldVector {
 public:
  FieldVector(std::size_t length, std::uint32_t modulus);
  FieldVector(std::vector<std::uint32_t> values, std::uint32_t modulus);

  std::size_t size() const { return values_.size(); }
  std::uint32_t modulus() const { return modulus_; }

  std::uint32_t at(std::size_t i) const;
  void set(std::size_t i, std::uint32_t value);

  FieldElement element(std::size_t i) const;

  /// Element-wise sum; lengths and moduli must match.
  FieldVector operator+(const FieldVector& o) const;
  FieldVector operator-(const FieldVector& o) const;

  /// Sum of all entries mod q (0 for the empty vector).
  std::uint32_t sum() const;

  /// Concatenation; moduli must match.
  FieldVector concat(const FieldVector& tail) const;

  const std::vector<std::uint32_t>& values() const { return values_; }

  bool operator==(const FieldVector& o) const = default;

 private:
  std::vector<std::uint32_t> values_;
  std::uint32_t modulus_;
};

/// Little-endian fixed-width encoding, field_byte_width(q) bytes per entry.
std::vector<std::uint8_t> encode_elements(const FieldVector& v);

/// Inverse of encode_elements; throws InputError on bad length or range.
FieldVector decode_elements(const std::vector<std::uint8_t>& bytes,
                            std::size_t count, std::uint32_t q);

/// Uniform residue via rejection sampling on ceil(log2 q)-bit blocks.
/// Blocks >= q are discarded; raw blocks are never reduced mod q.
std::uint32_t sample_uniform(RandomStream& stream, std::uint32_t q);

FieldVector sample_vector(RandomStream& stream, std::size_t length,
                          std::uint32_t q);

}  // namespace bimpc

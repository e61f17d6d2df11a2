#include "bimpc/field.hpp"

#include <string>

#include "bimpc/errors.hpp"

namespace bimpc {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  if (n % 3 == 0) return n == 3;
  for (std::uint64_t d = 5; d * d <= n; d += 6) {
    if (n % d == 0 || n % (d + 2) == 0) return false;
  }
  return true;
}

std::uint32_t smallest_prime_above(std::uint64_t n) {
  std::uint64_t c = n + 1;
  while (!is_prime(c)) ++c;
  if (c > kMaxModulus) {
    throw ConfigError("prime above " + std::to_string(n) + " exceeds 2^31-1");
  }
  return static_cast<std::uint32_t>(c);
}

void validate_modulus(std::uint32_t q) {
  if (q < 3 || q > kMaxModulus || !is_prime(q)) {
    throw ConfigError("modulus " + std::to_string(q) +
                      " is not an odd prime below 2^31");
  }
}

unsigned field_bit_width(std::uint32_t q) {
  unsigned bits = 0;
  std::uint32_t top = q - 1;
  while (top != 0) {
    ++bits;
    top >>= 1;
  }
  return bits == 0 ? 1 : bits;
}

unsigned field_byte_width(std::uint32_t q) {
  return (field_bit_width(q) + 7) / 8;
}

std::uint32_t mod_add(std::uint32_t x, std::uint32_t y, std::uint32_t q) {
  std::uint64_t s = std::uint64_t{x} + y;
  if (s >= q) s -= q;
  return static_cast<std::uint32_t>(s);
}

std::uint32_t mod_sub(std::uint32_t x, std::uint32_t y, std::uint32_t q) {
  return x >= y ? x - y : static_cast<std::uint32_t>(x + std::uint64_t{q} - y);
}

std::uint32_t mod_mul(std::uint32_t x, std::uint32_t y, std::uint32_t q) {
  return static_cast<std::uint32_t>(std::uint64_t{x} * y % q);
}

std::uint32_t mod_inv(std::uint32_t x, std::uint32_t q) {
  if (x == 0) {
    throw ConfigError("0 has no multiplicative inverse");
  }
  // Extended Euclid on (q, x); q prime guarantees gcd 1.
  std::int64_t r0 = q, r1 = x % q;
  std::int64_t t0 = 0, t1 = 1;
  while (r1 != 0) {
    std::int64_t k = r0 / r1;
    std::int64_t r2 = r0 - k * r1;
    std::int64_t t2 = t0 - k * t1;
    r0 = r1;
    r1 = r2;
    t0 = t1;
    t1 = t2;
  }
  if (t0 < 0) t0 += q;
  return static_cast<std::uint32_t>(t0);
}

namespace {

void require_same_modulus(std::uint32_t a, std::uint32_t b) {
  if (a != b) {
    throw ConfigError("modulus mismatch: " + std::to_string(a) + " vs " +
                      std::to_string(b));
  }
}

}  // namespace

FieldElement::FieldElement(std::uint64_t value, std::uint32_t modulus)
    : value_(static_cast<std::uint32_t>(value % modulus)), modulus_(modulus) {
  if (modulus < 3 || modulus > kMaxModulus || modulus % 2 == 0) {
    throw ConfigError("modulus must be odd and in [3, 2^31)");
  }
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  require_same_modulus(modulus_, o.modulus_);
  return FieldElement(mod_add(value_, o.value_, modulus_), modulus_);
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
  require_same_modulus(modulus_, o.modulus_);
  return FieldElement(mod_sub(value_, o.value_, modulus_), modulus_);
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
  require_same_modulus(modulus_, o.modulus_);
  return FieldElement(mod_mul(value_, o.value_, modulus_), modulus_);
}

FieldElement FieldElement::operator-() const {
  return FieldElement(mod_sub(0, value_, modulus_), modulus_);
}

FieldElement FieldElement::inverse() const {
  return FieldElement(mod_inv(value_, modulus_), modulus_);
}

FieldVector::FieldVector(std::size_t length, std::uint32_t modulus)
    : values_(length, 0), modulus_(modulus) {}

FieldVector::FieldVector(std::vector<std::uint32_t> values,
                         std::uint32_t modulus)
    : values_(std::move(values)), modulus_(modulus) {
  for (std::uint32_t v : values_) {
    if (v >= modulus_) {
      throw InputError("entry " + std::to_string(v) + " not reduced mod " +
                       std::to_string(modulus_));
    }
  }
}

std::uint32_t FieldVector::at(std::size_t i) const {
  if (i >= values_.size()) {
    throw InputError("vector index out of range");
  }
  return values_[i];
}

void FieldVector::set(std::size_t i, std::uint32_t value) {
  if (i >= values_.size()) {
    throw InputError("vector index out of range");
  }
  if (value >= modulus_) {
    throw InputError("entry not reduced mod " + std::to_string(modulus_));
  }
  values_[i] = value;
}

FieldElement FieldVector::element(std::size_t i) const {
  return FieldElement(at(i), modulus_);
}

FieldVector FieldVector::operator+(const FieldVector& o) const {
  require_same_modulus(modulus_, o.modulus_);
  if (values_.size() != o.values_.size()) {
    throw InputError("vector length mismatch");
  }
  FieldVector out(values_.size(), modulus_);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    out.values_[i] = mod_add(values_[i], o.values_[i], modulus_);
  }
  return out;
}

FieldVector FieldVector::operator-(const FieldVector& o) const {
  require_same_modulus(modulus_, o.modulus_);
  if (values_.size() != o.values_.size()) {
    throw InputError("vector length mismatch");
  }
  FieldVector out(values_.size(), modulus_);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    out.values_[i] = mod_sub(values_[i], o.values_[i], modulus_);
  }
  return out;
}

std::uint32_t FieldVector::sum() const {
  std::uint32_t acc = 0;
  for (std::uint32_t v : values_) acc = mod_add(acc, v, modulus_);
  return acc;
}

FieldVector FieldVector::concat(const FieldVector& tail) const {
  require_same_modulus(modulus_, tail.modulus_);
  std::vector<std::uint32_t> joined = values_;
  joined.insert(joined.end(), tail.values_.begin(), tail.values_.end());
  return FieldVector(std::move(joined), modulus_);
}

std::vector<std::uint8_t> encode_elements(const FieldVector& v) {
  unsigned width = field_byte_width(v.modulus());
  std::vector<std::uint8_t> out;
  out.reserve(v.size() * width);
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::uint32_t x = v.at(i);
    for (unsigned b = 0; b < width; ++b) {
      out.push_back(static_cast<std::uint8_t>(x >> (8 * b)));
    }
  }
  return out;
}

FieldVector decode_elements(const std::vector<std::uint8_t>& bytes,
                            std::size_t count, std::uint32_t q) {
  unsigned width = field_byte_width(q);
  if (bytes.size() != count * width) {
    throw InputError("encoded length " + std::to_string(bytes.size()) +
                     " does not hold " + std::to_string(count) + " entries");
  }
  std::vector<std::uint32_t> values(count, 0);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t x = 0;
    for (unsigned b = 0; b < width; ++b) {
      x |= std::uint32_t{bytes[i * width + b]} << (8 * b);
    }
    if (x >= q) {
      throw InputError("decoded entry " + std::to_string(x) +
                       " not reduced mod " + std::to_string(q));
    }
    values[i] = x;
  }
  return FieldVector(std::move(values), q);
}

std::uint32_t sample_uniform(RandomStream& stream, std::uint32_t q) {
  unsigned bits = field_bit_width(q);
  for (;;) {
    std::uint64_t block = stream.draw_block(bits);
    if (block < q) return static_cast<std::uint32_t>(block);
  }
}

FieldVector sample_vector(RandomStream& stream, std::size_t length,
                          std::uint32_t q) {
  FieldVector out(length, q);
  for (std::size_t i = 0; i < length; ++i) {
    out.set(i, sample_uniform(stream, q));
  }
  return out;
}

}  // namespace bimpc

#include "bimpc/doma.hpp"

#include <string>

namespace bimpc {

DomaDecomposition and_via_modadd(const std::vector<BitVector>& inputs) {
  if (inputs.size() < 2) {
    throw InputError("conjunction needs at least 2 vectors");
  }
  std::size_t n = inputs[0].size();
  for (const BitVector& v : inputs) {
    if (v.size() != n) throw InputError("input length mismatch");
  }
  std::uint32_t l = static_cast<std::uint32_t>(inputs.size());

  DomaDecomposition out;
  out.elementwise_sum.resize(n);
  out.remainder.resize(n);
  out.conjunction = BitVector::zeros(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t s = 0;
    for (const BitVector& v : inputs) s += v.at(i);
    std::uint32_t m = s % l;
    out.elementwise_sum[i] = s;
    out.remainder[i] = m;
    out.conjunction.set(i, static_cast<std::uint8_t>((s - m) / l));
  }
  return out;
}

std::uint64_t dot_via_modadd(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size()) throw InputError("input length mismatch");
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::uint32_t s = std::uint32_t{a.at(i)} + b.at(i);
    acc += (s - (s % 2)) / 2;
  }
  return acc;
}

std::uint64_t brute_force_dot(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size()) throw InputError("input length mismatch");
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += std::uint64_t{a.at(i)} * b.at(i);
  }
  return acc;
}

}  // namespace bimpc

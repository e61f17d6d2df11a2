#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <vector>

#include "bimpc/doma.hpp"
#include "bimpc/errors.hpp"
#include "bimpc/random.hpp"

using namespace bimpc;

namespace {

BitVector from_word(std::uint32_t word, std::size_t n) {
  std::vector<std::uint8_t> bits(n);
  for (std::size_t i = 0; i < n; ++i) bits[i] = (word >> i) & 1;
  return BitVector(std::move(bits));
}

// Direct oracle: per-entry logical AND, no arithmetic trick.
BitVector direct_and(const std::vector<BitVector>& inputs) {
  BitVector out = BitVector::zeros(inputs[0].size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint8_t all = 1;
    for (const BitVector& v : inputs) all &= v.at(i);
    out.set(i, all);
  }
  return out;
}

}  // namespace

TEST_CASE("pinned two-vector decomposition") {
  // a = (1,0,1,1), b = (1,1,0,1): sums (2,1,1,2), remainders (0,1,1,0),
  // conjunction (1,0,0,1).
  auto d = and_via_modadd({BitVector{1, 0, 1, 1}, BitVector{1, 1, 0, 1}});
  CHECK(d.elementwise_sum == std::vector<std::uint32_t>{2, 1, 1, 2});
  CHECK(d.remainder == std::vector<std::uint32_t>{0, 1, 1, 0});
  CHECK(d.conjunction == BitVector{1, 0, 0, 1});
}

TEST_CASE("conjunction matches the direct oracle exhaustively") {
  for (std::size_t l = 2; l <= 4; ++l) {
    for (std::size_t n = 1; n <= 4; ++n) {
      const std::uint64_t words = std::uint64_t{1} << (l * n);
      for (std::uint64_t tuple = 0; tuple < words; ++tuple) {
        std::vector<BitVector> inputs;
        for (std::size_t k = 0; k < l; ++k) {
          inputs.push_back(from_word(
              static_cast<std::uint32_t>(tuple >> (k * n)), n));
        }
        auto d = and_via_modadd(inputs);
        CAPTURE(l);
        CAPTURE(n);
        CAPTURE(tuple);
        REQUIRE(d.conjunction == direct_and(inputs));
      }
    }
  }
}

TEST_CASE("decomposition invariants hold on random wide inputs") {
  SeededStream stream(77);
  for (int round = 0; round < 200; ++round) {
    const std::size_t l = 2 + stream.draw_block(2) % 3;
    const std::size_t n = 1 + stream.draw_block(6);
    std::vector<BitVector> inputs;
    for (std::size_t k = 0; k < l; ++k) {
      std::vector<std::uint8_t> bits(n);
      for (auto& b : bits) b = static_cast<std::uint8_t>(stream.draw_block(1));
      inputs.emplace_back(std::move(bits));
    }
    auto d = and_via_modadd(inputs);
    for (std::size_t i = 0; i < n; ++i) {
      std::uint32_t s = 0;
      for (const auto& v : inputs) s += v.at(i);
      REQUIRE(d.elementwise_sum[i] == s);
      REQUIRE(d.remainder[i] == s % l);
      REQUIRE(d.conjunction.at(i) == (s == l ? 1 : 0));
      REQUIRE(d.conjunction.at(i) ==
              (d.elementwise_sum[i] - d.remainder[i]) / l);
    }
  }
}

TEST_CASE("dot product equals the multiply-accumulate oracle exhaustively") {
  for (std::size_t n = 1; n <= 6; ++n) {
    const std::uint32_t words = 1u << n;
    for (std::uint32_t wa = 0; wa < words; ++wa) {
      for (std::uint32_t wb = 0; wb < words; ++wb) {
        BitVector a = from_word(wa, n);
        BitVector b = from_word(wb, n);
        REQUIRE(dot_via_modadd(a, b) == brute_force_dot(a, b));
      }
    }
  }
}

TEST_CASE("dot product on long random vectors") {
  SeededStream stream(11);
  for (int round = 0; round < 20; ++round) {
    const std::size_t n = 500 + stream.draw_block(10);
    std::vector<std::uint8_t> xa(n), xb(n);
    for (std::size_t i = 0; i < n; ++i) {
      xa[i] = static_cast<std::uint8_t>(stream.draw_block(1));
      xb[i] = static_cast<std::uint8_t>(stream.draw_block(1));
    }
    BitVector a(std::move(xa)), b(std::move(xb));
    CHECK(dot_via_modadd(a, b) == brute_force_dot(a, b));
  }
  BitVector ones(std::vector<std::uint8_t>(1000, 1));
  CHECK(dot_via_modadd(ones, ones) == 1000);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(and_via_modadd({}), InputError);
  CHECK_THROWS_AS(and_via_modadd({BitVector{1, 0}}), InputError);
  CHECK_THROWS_AS(and_via_modadd({BitVector{1, 0}, BitVector{1}}), InputError);
  CHECK_THROWS_AS(dot_via_modadd(BitVector{1}, BitVector{1, 0}), InputError);
  CHECK_THROWS_AS(brute_force_dot(BitVector{1}, BitVector{1, 0}), InputError);
}

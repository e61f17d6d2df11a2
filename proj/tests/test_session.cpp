#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "bimpc/errors.hpp"
#include "bimpc/harness.hpp"
#include "bimpc/session.hpp"

using namespace bimpc;

namespace {

// Serves exactly the values a test injects; anything else is an error.
class InjectedProvider final : public RandomnessProvider {
 public:
  void put_fields(Rand purpose, std::vector<std::uint32_t> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      fields_[{purpose, i}] = values[i];
    }
  }
  void put_bits(Rand purpose, std::vector<std::uint8_t> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      bits_[{purpose, i}] = values[i];
    }
  }

  std::uint32_t field_value(Rand purpose, std::size_t index) override {
    auto it = fields_.find({purpose, index});
    if (it == fields_.end()) throw EnumerationError("uninjected field draw");
    return it->second;
  }
  std::uint8_t bit_value(Rand purpose, std::size_t index) override {
    auto it = bits_.find({purpose, index});
    if (it == bits_.end()) throw EnumerationError("uninjected bit draw");
    return it->second;
  }

 private:
  std::map<std::pair<Rand, std::size_t>, std::uint32_t> fields_;
  std::map<std::pair<Rand, std::size_t>, std::uint8_t> bits_;
};

InjectedProvider worked_example_provider() {
  InjectedProvider p;
  p.put_fields(Rand::MaskShare1, {3, 5});
  p.put_fields(Rand::PadShare1, {4});
  p.put_fields(Rand::MaskShare2, {2, 6});
  p.put_fields(Rand::PadShare2, {1});
  p.put_fields(Rand::LabelMask, {2, 3});
  p.put_fields(Rand::PadShared, {5});
  p.put_fields(Rand::KeyBlind, {0});
  p.put_fields(Rand::OtPad0, {4, 6, 0});
  p.put_fields(Rand::OtPad1, {2, 1, 0});
  p.put_bits(Rand::OtChoiceMask, {1, 0, 0});
  p.put_bits(Rand::XorMask, {1, 0});
  return p;
}

SessionConfig worked_example_config() {
  SessionConfig config;
  config.input_length = 2;
  config.pad_length = 1;
  config.modulus = 7;
  config.session_id = "worked";
  return config;
}

void expect_record(const TranscriptRecord& r, StepTag tag, PartyId from,
                   PartyId to, std::uint32_t ot_index,
                   std::vector<std::uint8_t> payload) {
  CHECK(r.message.tag == tag);
  CHECK(r.message.from == from);
  CHECK(r.message.to == to);
  CHECK(r.message.ot_index == ot_index);
  CHECK(r.message.payload == payload);
}

SessionConfig small_config(std::size_t n, std::size_t pad, std::uint32_t q,
                           std::uint64_t seed) {
  SessionConfig config;
  config.input_length = n;
  config.pad_length = pad;
  config.modulus = q;
  config.seeds = SeedSet::derive(seed);
  return config;
}

}  // namespace

TEST_CASE("seed derivation is deterministic and spreads") {
  SeedSet s1 = SeedSet::derive(1);
  SeedSet s2 = SeedSet::derive(1);
  CHECK(s1.client1_private == s2.client1_private);
  CHECK(s1.client2_master == s2.client2_master);
  std::vector<std::uint64_t> all = {s1.client1_private, s1.client2_private,
                                    s1.clients_shared, s1.client1_master,
                                    s1.client2_master};
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) CHECK(all[i] != all[j]);
  }
  CHECK(SeedSet::derive(2).client1_private != s1.client1_private);
}

TEST_CASE("configuration validation") {
  SessionConfig c = worked_example_config();
  CHECK_NOTHROW(c.validate());
  c.input_length = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = worked_example_config();
  c.modulus = 9;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = worked_example_config();
  c.modulus = 5;  // 5 <= 2 * 2 + 1 is fine, but 2n = 4 < 5, so this passes
  CHECK_NOTHROW(c.validate());
  c.input_length = 3;  // now 2n = 6 >= 5
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = worked_example_config();
  c.session_id.clear();
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK(worked_example_config().total_length() == 3);
  CHECK(worked_example_config().ot_slots() == 3);
  c = worked_example_config();
  c.variant = Variant::RawPad;
  CHECK(c.ot_slots() == 2);
}

TEST_CASE("step operations on a hand-built state") {
  const std::uint32_t q = 7;
  Client1State s1;
  s1.a = BitVector{1, 0};
  s1.mask_share = FieldVector({3, 5}, q);
  s1.pad_share = FieldVector(std::vector<std::uint32_t>{4}, q);
  s1.pad_shared = FieldVector(std::vector<std::uint32_t>{5}, q);
  CHECK(w1_make_additive_share(s1, q).values() ==
        std::vector<std::uint32_t>{4, 5, 4});
  CHECK(w1_key_sum(s1, q) == 0);  // (3+5) + (4-5) = 7 = 0 mod 7

  Client2State s2;
  s2.b = BitVector{1, 1};
  s2.mask_share = FieldVector({2, 6}, q);
  s2.pad_share = FieldVector(std::vector<std::uint32_t>{1}, q);
  s2.xor_mask = {1, 0};
  s2.label_mask = FieldVector({2, 3}, q);
  CHECK(w2_make_additive_share(s2, q).values() ==
        std::vector<std::uint32_t>{3, 0, 1});
  CHECK(w2_xor_mask_input(s2) == BitVector{0, 1});
  auto labels = w2_prepare_labels(s2, q);
  CHECK(labels.first.values() == std::vector<std::uint32_t>{3, 3});
  CHECK(labels.second.values() == std::vector<std::uint32_t>{2, 4});
  CHECK(w2_key_sum(s2, q) == 4);  // (2+6) - (2+3) + 1
  // The sabotage variant leaves the label masks in the sum.
  CHECK(w2_key_sum(s2, q, Variant::KeySumMissingLabelMask) == 2);  // 8 + 1

  CHECK(master_sum_shares(FieldVector({4, 5, 4}, q), FieldVector({3, 0, 1}, q))
            .values() == std::vector<std::uint32_t>{0, 5, 5});
  CHECK_THROWS_AS(
      master_sum_shares(FieldVector(std::vector<std::uint32_t>{1}, q), FieldVector({1, 2}, q)),
      ProtocolError);

  CHECK(w1_compute_selector_bits(s1, BitVector{0, 1}) == BitVector{1, 1});
  CHECK_THROWS_AS(w1_compute_selector_bits(s1, BitVector{0, 1, 0}),
                  ProtocolError);
}

TEST_CASE("finalize reconstructs and enforces the bound") {
  MasterState s;
  s.modulus = 7;
  s.summed_shares = FieldVector({0, 5, 5}, 7);
  s.unmasked = FieldVector({2, 4, 5}, 7);
  s.key_sum_payload1 = 0;
  s.key_sum_payload2 = 4;
  s.integrity_bound = 2;
  CHECK(master_finalize(s) == 1);
  CHECK(s.result == 1);

  s.integrity_bound = 0;
  CHECK_THROWS_AS(master_finalize(s), IntegrityError);
  CHECK(s.result == 1);  // recorded even when the bound trips
}

TEST_CASE("the worked example plays back bit for bit") {
  InjectedProvider provider = worked_example_provider();
  const SessionConfig config = worked_example_config();
  SessionOutcome out = run_session_with_provider(BitVector{1, 0},
                                                 BitVector{1, 1}, config,
                                                 provider);
  CHECK(out.integrity_ok);
  CHECK(out.y == 1);

  const auto& r = out.transcript.records;
  REQUIRE(r.size() == 15);
  const PartyId M = PartyId::Master, C1 = PartyId::Client1,
                C2 = PartyId::Client2;
  expect_record(r[0], StepTag::AdditiveShare, C1, M, kNoOtIndex, {4, 5, 4});
  expect_record(r[1], StepTag::AdditiveShare, C2, M, kNoOtIndex, {3, 0, 1});
  expect_record(r[2], StepTag::XorMaskedInput, C2, C1, kNoOtIndex, {0, 1});
  expect_record(r[3], StepTag::OtMaskedChoice, C1, C2, 0, {0});
  expect_record(r[4], StepTag::OtMaskedChoice, C1, C2, 1, {1});
  expect_record(r[5], StepTag::OtMaskedChoice, C1, C2, 2, {0});
  expect_record(r[6], StepTag::OtMaskedLabels, C2, C1, 0, {0, 4});
  expect_record(r[7], StepTag::OtMaskedLabels, C2, C1, 1, {4, 3});
  expect_record(r[8], StepTag::OtMaskedLabels, C2, C1, 2, {5, 5});
  expect_record(r[9], StepTag::KeySum, C2, M, kNoOtIndex, {4});
  expect_record(r[10], StepTag::OtDelivery, C1, M, 0, {4});
  expect_record(r[11], StepTag::OtDelivery, C1, M, 1, {3});
  expect_record(r[12], StepTag::OtDelivery, C1, M, 2, {5});
  expect_record(r[13], StepTag::PadVector, C1, M, kNoOtIndex, {});
  expect_record(r[14], StepTag::KeySum, C1, M, kNoOtIndex, {0});

  CHECK(out.master.summed_shares.values() ==
        std::vector<std::uint32_t>{0, 5, 5});
  CHECK(out.master.unmasked.values() == std::vector<std::uint32_t>{2, 4, 5});
  CHECK(out.master.key_sum_payload1 == 0);
  CHECK(out.master.key_sum_payload2 == 4);
}

TEST_CASE("sessions reconstruct the dot product for every small input") {
  for (std::size_t n = 1; n <= 3; ++n) {
    SessionConfig config = small_config(n, n % 2, smallest_prime_above(2 * n),
                                        900 + n);
    for (std::uint32_t wa = 0; wa < (1u << n); ++wa) {
      for (std::uint32_t wb = 0; wb < (1u << n); ++wb) {
        std::vector<std::uint8_t> xa(n), xb(n);
        std::uint64_t want = 0;
        for (std::size_t i = 0; i < n; ++i) {
          xa[i] = (wa >> i) & 1;
          xb[i] = (wb >> i) & 1;
          want += xa[i] & xb[i];
        }
        SessionOutcome out =
            run_session(BitVector(xa), BitVector(xb), config);
        REQUIRE(out.integrity_ok);
        REQUIRE(out.y == want);
      }
    }
  }
}

TEST_CASE("mask cancellation identity holds white box") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const std::size_t n = 1 + seed % 5;
    SessionConfig config =
        small_config(n, (seed * 7) % 3, smallest_prime_above(2 * n + seed % 4),
                     seed);
    std::vector<std::uint8_t> xa(n), xb(n);
    for (std::size_t i = 0; i < n; ++i) {
      xa[i] = (seed >> i) & 1;
      xb[i] = (seed >> (i + 2)) & 1;
    }
    SessionOutcome out = run_session(BitVector(xa), BitVector(xb), config);
    REQUIRE(out.integrity_ok);
    const std::uint32_t q = config.modulus;
    std::uint32_t acc = 0;
    for (std::size_t i = 0; i < out.master.summed_shares.size(); ++i) {
      acc = mod_add(acc,
                    mod_sub(out.master.summed_shares.at(i),
                            out.master.unmasked.at(i), q),
                    q);
    }
    acc = mod_sub(acc, out.master.key_sum_payload1, q);
    acc = mod_sub(acc, out.master.key_sum_payload2, q);
    // What remains after the key sums is exactly twice the dot product.
    REQUIRE(acc == mod_add(static_cast<std::uint32_t>(out.y % q),
                           static_cast<std::uint32_t>(out.y % q), q));
  }
}

TEST_CASE("sabotage variants change exactly what they claim") {
  SessionConfig config = small_config(2, 1, 7, 5);

  config.variant = Variant::NoXorMask;
  SeededProvider p1(config);
  Client2Party c2(BitVector{1, 0}, config, p1);
  CHECK(c2.state().xor_mask == std::vector<std::uint8_t>{0, 0});
  CHECK(w2_xor_mask_input(c2.state()) == BitVector{1, 0});

  // The protocol still reconstructs correctly under both data sabotages;
  // they break privacy, not correctness.
  for (Variant v : {Variant::NoXorMask, Variant::KeySumMissingLabelMask}) {
    config.variant = v;
    SessionOutcome out = run_session(BitVector{1, 1}, BitVector{1, 0}, config);
    if (v == Variant::NoXorMask) {
      CHECK(out.integrity_ok);
      CHECK(out.y == 1);
    }
    // The broken key sum shifts y by the label masks; it may or may not
    // trip the bound, but the session always completes a transcript.
    CHECK(out.transcript.records.size() == 15);
  }

  config.variant = Variant::RawPad;
  SessionOutcome out = run_session(BitVector{1, 1}, BitVector{1, 0}, config);
  CHECK(out.integrity_ok);
  CHECK(out.y == 1);
  // One transfer per real entry only, plus the pad values in the clear.
  std::size_t deliveries = 0;
  bool saw_raw_pad = false;
  for (const auto& rec : out.transcript.records) {
    if (rec.message.tag == StepTag::OtDelivery) ++deliveries;
    if (rec.message.tag == StepTag::PadVector) {
      saw_raw_pad = !rec.message.payload.empty();
    }
  }
  CHECK(deliveries == 2);
  CHECK(saw_raw_pad);
}

TEST_CASE("parties reject out-of-order and misaddressed messages") {
  SessionConfig config = small_config(2, 1, 7, 9);
  SeededProvider provider(config);
  Client1Party c1(BitVector{1, 0}, config, provider);
  Client2Party c2(BitVector{1, 1}, config, provider);
  MasterParty master(config, provider);

  ProtocolMessage misaddressed;
  misaddressed.tag = StepTag::XorMaskedInput;
  misaddressed.from = PartyId::Client2;
  misaddressed.to = PartyId::Client2;
  misaddressed.payload = {0, 1};
  CHECK_THROWS_AS(c1.handle(misaddressed), ProtocolError);

  ProtocolMessage labels_first;
  labels_first.tag = StepTag::OtMaskedLabels;
  labels_first.from = PartyId::Client2;
  labels_first.to = PartyId::Client1;
  labels_first.ot_index = 0;
  labels_first.payload = {1, 2};
  CHECK_THROWS_AS(c1.handle(labels_first), ProtocolError);

  ProtocolMessage wrong_slot;
  wrong_slot.tag = StepTag::OtMaskedChoice;
  wrong_slot.from = PartyId::Client1;
  wrong_slot.to = PartyId::Client2;
  wrong_slot.ot_index = 1;
  wrong_slot.payload = {0};
  CHECK_THROWS_AS(c2.handle(wrong_slot), ProtocolError);

  ProtocolMessage not_a_bit = wrong_slot;
  not_a_bit.ot_index = 0;
  not_a_bit.payload = {2};
  CHECK_THROWS_AS(c2.handle(not_a_bit), ProtocolError);

  ProtocolMessage early_delivery;
  early_delivery.tag = StepTag::OtDelivery;
  early_delivery.from = PartyId::Client1;
  early_delivery.to = PartyId::Master;
  early_delivery.ot_index = 0;
  early_delivery.payload = {3};
  CHECK_THROWS_AS(master.handle(early_delivery), ProtocolError);

  ProtocolMessage early_keysum;
  early_keysum.tag = StepTag::KeySum;
  early_keysum.from = PartyId::Client1;
  early_keysum.to = PartyId::Master;
  early_keysum.payload = {0};
  CHECK_THROWS_AS(master.handle(early_keysum), ProtocolError);

  ProtocolMessage share = c1.start().at(0);
  CHECK_NOTHROW(master.handle(share));
  CHECK_THROWS_AS(master.handle(share), ProtocolError);  // duplicate

  ProtocolMessage odd_tag = share;
  odd_tag.tag = StepTag::XorMaskedInput;
  CHECK_THROWS_AS(master.handle(odd_tag), ProtocolError);

  CHECK_THROWS_AS(master.result(), ProtocolError);  // not finished
}

TEST_CASE("master rejects duplicate deliveries and bad slots") {
  SessionConfig config = small_config(1, 1, 5, 11);
  SeededProvider provider(config);
  Client1Party c1(BitVector{1}, config, provider);
  Client2Party c2(BitVector{1}, config, provider);
  MasterParty master(config, provider);

  for (auto& m : c1.start()) master.handle(m);
  for (auto& m : c2.start()) {
    if (m.to == PartyId::Master) master.handle(m);
  }

  ProtocolMessage delivery;
  delivery.tag = StepTag::OtDelivery;
  delivery.from = PartyId::Client1;
  delivery.to = PartyId::Master;
  delivery.ot_index = 0;
  delivery.payload = {2};
  CHECK_NOTHROW(master.handle(delivery));
  CHECK_THROWS_AS(master.handle(delivery), ProtocolError);  // same slot twice

  ProtocolMessage out_of_range = delivery;
  out_of_range.ot_index = 2;
  CHECK_THROWS_AS(master.handle(out_of_range), ProtocolError);
  out_of_range.ot_index = kNoOtIndex;
  CHECK_THROWS_AS(master.handle(out_of_range), ProtocolError);
}

TEST_CASE("input length must match the configuration") {
  SessionConfig config = small_config(2, 0, 5, 3);
  SeededProvider provider(config);
  CHECK_THROWS_AS(Client1Party(BitVector{1}, config, provider), InputError);
  CHECK_THROWS_AS(Client2Party(BitVector{1, 0, 1}, config, provider),
                  InputError);
}

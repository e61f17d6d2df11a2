#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bimpc/bits.hpp"
#include "bimpc/field.hpp"
#include "bimpc/message.hpp"

namespace bimpc {

// Two clients hold private bit vectors a and b of length n; a master should
// learn y = dot(a, b) and nothing else, and in particular never n itself.
// Phases: additive (masked shares with n' chaff entries), xor (per-slot
// oblivious transfers delivering m + k where m = a XOR b, with n' pad slots
// run as real transfers on constant labels so the master cannot tell them
// apart), key (blinded key-sum scalars), finalize.

/// Protocol variants. Faithful is the real protocol; the others are sabotage
/// fixtures that privacy checks must catch.
enum class Variant : std::uint8_t {
  Faithful = 0,
  NoXorMask = 1,              // client 2's xor mask forced to zero
  KeySumMissingLabelMask = 2, // client 2's key sum omits the -sum(k) term
  RawPad = 3,                 // no pad slots; pad values sent in the clear
};

/// Root seeds for the three pairwise channels and two private sources.
struct SeedSet {
  std::uint64_t client1_private = 0;
  std::uint64_t client2_private = 0;
  std::uint64_t clients_shared = 0;  // client1 <-> client2
  std::uint64_t client1_master = 0;  // client1 <-> master
  std::uint64_t client2_master = 0;  // client2 <-> master

  /// All five seeds from one root, via labeled splitmix streams.
  static SeedSet derive(std::uint64_t root);
};

struct SessionConfig {
  std::size_t input_length = 0;  // n, private to the clients
  std::size_t pad_length = 0;    // n', chaff entries hiding n from the master
  std::uint32_t modulus = 0;     // q, odd prime > 2n
  SeedSet seeds{};
  Variant variant = Variant::Faithful;
  std::string session_id = "s0";

  std::size_t total_length() const { return input_length + pad_length; }

  /// Transfer slots: every entry of the padded vector in the faithful
  /// protocol, only the real entries in the RawPad sabotage.
  std::size_t ot_slots() const {
    return variant == Variant::RawPad ? input_length : total_length();
  }

  void validate() const;
};

/// Every random value a session consumes, named by what it masks.
enum class Rand : std::uint8_t {
  MaskShare1 = 0,    // client 1 additive mask, n entries
  PadShare1 = 1,     // client 1 chaff, n' entries
  MaskShare2 = 2,    // client 2 additive mask, n entries
  PadShare2 = 3,     // client 2 chaff, n' entries
  LabelMask = 4,     // client 2 label mask k, n entries
  PadShared = 5,     // shared pad values p, n' entries (clients' channel)
  KeyBlind = 6,      // shared key-sum blind r, 1 entry (clients' channel)
  OtPad0 = 7,        // transfer pads, one per slot (client2/master channel)
  OtPad1 = 8,
  XorMask = 9,       // client 2 xor mask bits, n (bit-valued)
  OtChoiceMask = 10, // per-slot choice mask bits (client1/master channel)
};

std::string_view rand_name(Rand purpose);
bool rand_is_bit(Rand purpose);

std::string_view variant_name(Variant v);

/// Serves the session's named random values. Seeded for normal runs,
/// assignment-backed for enumeration, counting for cost prediction.
class RandomnessProvider {
 public:
  virtual ~RandomnessProvider() = default;

  /// Residue in [0, q) for a field-valued purpose.
  virtual std::uint32_t field_value(Rand purpose, std::size_t index) = 0;

  /// 0 or 1 for a bit-valued purpose.
  virtual std::uint8_t bit_value(Rand purpose, std::size_t index) = 0;
};

// --- per-party state -------------------------------------------------------

struct Client1State {
  BitVector a;
  FieldVector mask_share{0, 3};   // additive mask over the real entries
  FieldVector pad_share{0, 3};    // private chaff
  FieldVector pad_shared{0, 3};   // shared pad values
  std::uint32_t key_blind = 0;
  std::vector<std::uint8_t> choice_mask;  // one bit per transfer slot
  BitVector selector_bits;        // a XOR (masked b), set in the xor phase
};

struct Client2State {
  BitVector b;
  FieldVector mask_share{0, 3};
  FieldVector pad_share{0, 3};
  FieldVector label_mask{0, 3};   // k
  FieldVector pad_shared{0, 3};
  std::uint32_t key_blind = 0;
  std::vector<std::uint8_t> xor_mask;  // k2m bits
  FieldVector label0{0, 3};       // per real entry
  FieldVector label1{0, 3};
  FieldVector ot_pad0{0, 3};      // per transfer slot
  FieldVector ot_pad1{0, 3};
};

struct MasterState {
  std::uint32_t modulus = 0;
  FieldVector share1{0, 3};
  FieldVector share2{0, 3};
  FieldVector summed_shares{0, 3};    // s'', after both shares arrive
  FieldVector unmasked{0, 3};         // m'', one entry per slot as unmasked
  std::vector<bool> slot_seen;
  std::uint32_t key_sum_payload1 = 0; // blinded scalars as received
  std::uint32_t key_sum_payload2 = 0;
  std::uint64_t result = 0;
  // Harness-side bound for the y <= n integrity check; the message layer
  // never discloses it and views never include it.
  std::size_t integrity_bound = 0;
};

// --- step operations -------------------------------------------------------

/// Masked share plus chaff: [a + mask : pad], n+n' entries.
FieldVector w1_make_additive_share(const Client1State& s, std::uint32_t q);

FieldVector w2_make_additive_share(const Client2State& s, std::uint32_t q);

/// Element-wise sum of the two shares; order of arrival is irrelevant.
FieldVector master_sum_shares(const FieldVector& share1,
                              const FieldVector& share2);

/// b XOR k2m, sent to client 1.
BitVector w2_xor_mask_input(const Client2State& s);

/// a XOR (masked b): the per-entry transfer choice bits.
BitVector w1_compute_selector_bits(const Client1State& s,
                                   const BitVector& masked_input);

/// Labels for the real entries: label0 = k2m + k, label1 = (1 - k2m) + k.
std::pair<FieldVector, FieldVector> w2_prepare_labels(const Client2State& s,
                                                      std::uint32_t q);

/// Key-sum scalar of client 1: sum(mask) + sum(chaff - shared pad).
std::uint32_t w1_key_sum(const Client1State& s, std::uint32_t q);

/// Key-sum scalar of client 2: sum(mask - label mask) + sum(chaff).
std::uint32_t w2_key_sum(const Client2State& s, std::uint32_t q,
                         Variant variant = Variant::Faithful);

/// y = (sum(s'' - m'') - ks1 - ks2) / 2 in the field; throws IntegrityError
/// if the reconstructed value exceeds the integrity bound.
std::uint64_t master_finalize(MasterState& s);

// --- party state machines --------------------------------------------------

/// Message-driven wrapper around one party: start() yields the party's
/// unprompted emissions, handle() consumes one addressed message and yields
/// follow-ups. Out-of-order input raises ProtocolError.
class Party {
 public:
  virtual ~Party() = default;
  virtual PartyId id() const = 0;
  virtual std::vector<ProtocolMessage> start() = 0;
  virtual std::vector<ProtocolMessage> handle(const ProtocolMessage& m) = 0;
  virtual bool done() const = 0;

  /// What the party would say it is waiting for; used in stall reports.
  virtual std::string pending_description() const = 0;

  /// Pre-shared randomness this party holds, canonically serialized; the
  /// trailing section of its view.
  virtual std::vector<std::uint8_t> preshared_view_bytes() const = 0;
};

class Client1Party final : public Party {
 public:
  Client1Party(BitVector a, const SessionConfig& config,
               RandomnessProvider& provider);

  PartyId id() const override { return PartyId::Client1; }
  std::vector<ProtocolMessage> start() override;
  std::vector<ProtocolMessage> handle(const ProtocolMessage& m) override;
  bool done() const override { return phase_ == Phase::Done; }
  std::string pending_description() const override;
  std::vector<std::uint8_t> preshared_view_bytes() const override;

  const Client1State& state() const { return state_; }

 private:
  enum class Phase { AwaitMaskedInput, AwaitLabels, Done };

  std::uint8_t slot_choice(std::size_t slot) const;

  SessionConfig config_;
  Client1State state_;
  Phase phase_ = Phase::AwaitMaskedInput;
  std::size_t next_slot_ = 0;
};

class Client2Party final : public Party {
 public:
  Client2Party(BitVector b, const SessionConfig& config,
               RandomnessProvider& provider);

  PartyId id() const override { return PartyId::Client2; }
  std::vector<ProtocolMessage> start() override;
  std::vector<ProtocolMessage> handle(const ProtocolMessage& m) override;
  bool done() const override { return next_slot_ >= config_.ot_slots(); }
  std::string pending_description() const override;
  std::vector<std::uint8_t> preshared_view_bytes() const override;

  const Client2State& state() const { return state_; }

 private:
  SessionConfig config_;
  Client2State state_;
  std::size_t next_slot_ = 0;
};

class MasterParty final : public Party {
 public:
  MasterParty(const SessionConfig& config, RandomnessProvider& provider);

  PartyId id() const override { return PartyId::Master; }
  std::vector<ProtocolMessage> start() override { return {}; }
  std::vector<ProtocolMessage> handle(const ProtocolMessage& m) override;
  bool done() const override { return finalized_; }
  std::string pending_description() const override;
  std::vector<std::uint8_t> preshared_view_bytes() const override;

  /// Reconstructed y; rethrows the recorded IntegrityError if the bound
  /// check failed, so sabotaged sessions still leave a complete transcript.
  std::uint64_t result() const;
  bool integrity_ok() const { return finalized_ && integrity_ok_; }
  const MasterState& state() const { return state_; }

 private:
  void maybe_finalize();

  SessionConfig config_;
  MasterState state_;
  FieldVector ot_pad0_{0, 3};  // pre-shared with client 2, one per slot
  FieldVector ot_pad1_{0, 3};
  std::vector<std::uint8_t> choice_mask_;  // pre-shared with client 1
  // Per-sender progress for state-machine safety.
  bool share1_seen_ = false;
  bool share2_seen_ = false;
  std::size_t deliveries_seen_ = 0;
  bool pad_marker_seen_ = false;
  bool key_sum1_seen_ = false;
  bool key_sum2_seen_ = false;
  bool finalized_ = false;
  bool integrity_ok_ = false;
  std::string integrity_message_;
};

}  // namespace bimpc

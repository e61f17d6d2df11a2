#include "bimpc/session.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "bimpc/errors.hpp"
#include "bimpc/prg.hpp"
#include "bimpc/triot.hpp"

namespace bimpc {

namespace {

FieldVector draw_fields(RandomnessProvider& provider, Rand purpose,
                        std::size_t count, std::uint32_t q) {
  FieldVector out(count, q);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t v = provider.field_value(purpose, i);
    if (v >= q) {
      throw ConfigError("randomness provider returned a value outside the field");
    }
    out.set(i, v);
  }
  return out;
}

std::vector<std::uint8_t> draw_bits(RandomnessProvider& provider, Rand purpose,
                                    std::size_t count) {
  std::vector<std::uint8_t> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint8_t v = provider.bit_value(purpose, i);
    if (v > 1) {
      throw ConfigError("randomness provider returned a non-bit value");
    }
    out[i] = v;
  }
  return out;
}

std::vector<std::uint8_t> encode_bit_payload(const BitVector& v) {
  return v.bits();
}

BitVector decode_bit_payload(const std::vector<std::uint8_t>& payload,
                             std::size_t expected) {
  if (payload.size() != expected) {
    throw ProtocolError("bit payload has the wrong length");
  }
  for (std::uint8_t b : payload) {
    if (b > 1) throw ProtocolError("bit payload holds a non-bit byte");
  }
  return BitVector(payload);
}

FieldVector decode_field_payload(const std::vector<std::uint8_t>& payload,
                                 std::size_t count, std::uint32_t q) {
  try {
    return decode_elements(payload, count, q);
  } catch (const InputError& e) {
    throw ProtocolError(std::string("malformed field payload: ") + e.what());
  }
}

std::vector<std::uint8_t> encode_scalar(std::uint32_t value, std::uint32_t q) {
  return encode_elements(FieldVector(std::vector<std::uint32_t>{value}, q));
}

ProtocolMessage make_msg(StepTag tag, PartyId from, PartyId to,
                         std::uint32_t ot_index,
                         std::vector<std::uint8_t> payload) {
  ProtocolMessage m;
  m.tag = tag;
  m.from = from;
  m.to = to;
  m.ot_index = ot_index;
  m.payload = std::move(payload);
  return m;
}

void append(std::vector<std::uint8_t>& out,
            const std::vector<std::uint8_t>& piece) {
  out.insert(out.end(), piece.begin(), piece.end());
}

}  // namespace

SeedSet SeedSet::derive(std::uint64_t root) {
  auto sub = [root](std::string_view label) {
    return splitmix64_block(root ^ fnv1a64(label), 0);
  };
  SeedSet s;
  s.client1_private = sub("seed/client1-private");
  s.client2_private = sub("seed/client2-private");
  s.clients_shared = sub("seed/clients-shared");
  s.client1_master = sub("seed/client1-master");
  s.client2_master = sub("seed/client2-master");
  return s;
}

void SessionConfig::validate() const {
  if (input_length == 0) throw ConfigError("input length must be at least 1");
  validate_modulus(modulus);
  if (std::uint64_t{modulus} <= 2 * std::uint64_t{input_length}) {
    throw ConfigError("modulus must exceed twice the input length");
  }
  if (session_id.empty()) throw ConfigError("session id must not be empty");
}

std::string_view rand_name(Rand purpose) {
  switch (purpose) {
    case Rand::MaskShare1: return "mask-share-1";
    case Rand::PadShare1: return "pad-share-1";
    case Rand::MaskShare2: return "mask-share-2";
    case Rand::PadShare2: return "pad-share-2";
    case Rand::LabelMask: return "label-mask";
    case Rand::PadShared: return "pad-shared";
    case Rand::KeyBlind: return "key-blind";
    case Rand::OtPad0: return "ot-pad-0";
    case Rand::OtPad1: return "ot-pad-1";
    case Rand::XorMask: return "xor-mask";
    case Rand::OtChoiceMask: return "ot-choice-mask";
  }
  throw ConfigError("unknown randomness purpose");
}

bool rand_is_bit(Rand purpose) {
  return purpose == Rand::XorMask || purpose == Rand::OtChoiceMask;
}

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::Faithful: return "faithful";
    case Variant::NoXorMask: return "no-xor-mask";
    case Variant::KeySumMissingLabelMask: return "keysum-missing-label-mask";
    case Variant::RawPad: return "raw-pad";
  }
  throw ConfigError("unknown variant");
}

// --- step operations -------------------------------------------------------

FieldVector w1_make_additive_share(const Client1State& s, std::uint32_t q) {
  const std::size_t n = s.a.size();
  FieldVector out(n + s.pad_share.size(), q);
  for (std::size_t i = 0; i < n; ++i) {
    out.set(i, mod_add(s.a.at(i), s.mask_share.at(i), q));
  }
  for (std::size_t j = 0; j < s.pad_share.size(); ++j) {
    out.set(n + j, s.pad_share.at(j));
  }
  return out;
}

FieldVector w2_make_additive_share(const Client2State& s, std::uint32_t q) {
  const std::size_t n = s.b.size();
  FieldVector out(n + s.pad_share.size(), q);
  for (std::size_t i = 0; i < n; ++i) {
    out.set(i, mod_add(s.b.at(i), s.mask_share.at(i), q));
  }
  for (std::size_t j = 0; j < s.pad_share.size(); ++j) {
    out.set(n + j, s.pad_share.at(j));
  }
  return out;
}

FieldVector master_sum_shares(const FieldVector& share1,
                              const FieldVector& share2) {
  if (share1.size() != share2.size() || share1.modulus() != share2.modulus()) {
    throw ProtocolError("additive shares disagree on length or modulus");
  }
  return share1 + share2;
}

BitVector w2_xor_mask_input(const Client2State& s) {
  BitVector out = BitVector::zeros(s.b.size());
  for (std::size_t i = 0; i < s.b.size(); ++i) {
    out.set(i, s.b.at(i) ^ s.xor_mask[i]);
  }
  return out;
}

BitVector w1_compute_selector_bits(const Client1State& s,
                                   const BitVector& masked_input) {
  if (masked_input.size() != s.a.size()) {
    throw ProtocolError("masked input has the wrong length");
  }
  return s.a ^ masked_input;
}

std::pair<FieldVector, FieldVector> w2_prepare_labels(const Client2State& s,
                                                      std::uint32_t q) {
  const std::size_t n = s.b.size();
  FieldVector label0(n, q);
  FieldVector label1(n, q);
  for (std::size_t i = 0; i < n; ++i) {
    label0.set(i, mod_add(s.xor_mask[i], s.label_mask.at(i), q));
    label1.set(i, mod_add(1 - s.xor_mask[i], s.label_mask.at(i), q));
  }
  return {label0, label1};
}

std::uint32_t w1_key_sum(const Client1State& s, std::uint32_t q) {
  std::uint32_t total = s.mask_share.sum();
  total = mod_add(total, (s.pad_share - s.pad_shared).sum(), q);
  return total;
}

std::uint32_t w2_key_sum(const Client2State& s, std::uint32_t q,
                         Variant variant) {
  std::uint32_t total = s.mask_share.sum();
  if (variant != Variant::KeySumMissingLabelMask) {
    total = mod_sub(total, s.label_mask.sum(), q);
  }
  return mod_add(total, s.pad_share.sum(), q);
}

std::uint64_t master_finalize(MasterState& s) {
  const std::uint32_t q = s.modulus;
  std::uint32_t acc = 0;
  for (std::size_t i = 0; i < s.summed_shares.size(); ++i) {
    acc = mod_add(acc, mod_sub(s.summed_shares.at(i), s.unmasked.at(i), q), q);
  }
  acc = mod_sub(acc, mod_add(s.key_sum_payload1, s.key_sum_payload2, q), q);
  const std::uint32_t y = mod_mul(acc, mod_inv(2, q), q);
  s.result = y;
  if (y > s.integrity_bound) {
    throw IntegrityError("reconstructed value " + std::to_string(y) +
                         " exceeds the integrity bound " +
                         std::to_string(s.integrity_bound));
  }
  return y;
}

// --- client 1 ---------------------------------------------------------------

Client1Party::Client1Party(BitVector a, const SessionConfig& config,
                           RandomnessProvider& provider)
    : config_(config) {
  config_.validate();
  if (a.size() != config_.input_length) {
    throw InputError("input length does not match the session configuration");
  }
  const std::uint32_t q = config_.modulus;
  state_.a = std::move(a);
  state_.mask_share =
      draw_fields(provider, Rand::MaskShare1, config_.input_length, q);
  state_.pad_share =
      draw_fields(provider, Rand::PadShare1, config_.pad_length, q);
  state_.pad_shared =
      draw_fields(provider, Rand::PadShared, config_.pad_length, q);
  state_.key_blind = draw_fields(provider, Rand::KeyBlind, 1, q).at(0);
  state_.choice_mask =
      draw_bits(provider, Rand::OtChoiceMask, config_.ot_slots());
}

std::vector<ProtocolMessage> Client1Party::start() {
  return {make_msg(StepTag::AdditiveShare, PartyId::Client1, PartyId::Master,
                   kNoOtIndex,
                   encode_elements(w1_make_additive_share(state_,
                                                          config_.modulus)))};
}

std::uint8_t Client1Party::slot_choice(std::size_t slot) const {
  // Pad slots run the transfer on a constant label pair; the fixed zero
  // choice never reaches the wire unmasked.
  return slot < config_.input_length ? state_.selector_bits.at(slot) : 0;
}

std::vector<ProtocolMessage> Client1Party::handle(const ProtocolMessage& m) {
  const std::uint32_t q = config_.modulus;
  if (m.to != PartyId::Client1) {
    throw ProtocolError("message delivered to the wrong party");
  }
  if (phase_ == Phase::AwaitMaskedInput) {
    if (m.tag != StepTag::XorMaskedInput || m.from != PartyId::Client2) {
      throw ProtocolError("client 1 expected the masked input");
    }
    BitVector masked = decode_bit_payload(m.payload, config_.input_length);
    state_.selector_bits = w1_compute_selector_bits(state_, masked);
    phase_ = Phase::AwaitLabels;
    std::vector<ProtocolMessage> out;
    out.reserve(config_.ot_slots());
    for (std::size_t slot = 0; slot < config_.ot_slots(); ++slot) {
      const std::uint8_t masked_choice =
          selector_mask_choice(slot_choice(slot), state_.choice_mask[slot]);
      out.push_back(make_msg(StepTag::OtMaskedChoice, PartyId::Client1,
                             PartyId::Client2,
                             static_cast<std::uint32_t>(slot),
                             {masked_choice}));
    }
    return out;
  }
  if (phase_ == Phase::AwaitLabels) {
    if (m.tag != StepTag::OtMaskedLabels || m.from != PartyId::Client2) {
      throw ProtocolError("client 1 expected a label pair");
    }
    if (m.ot_index != next_slot_) {
      throw ProtocolError("label pair arrived out of slot order");
    }
    FieldVector labels = decode_field_payload(m.payload, 2, q);
    const FieldElement delivery = selector_forward(
        labels.element(0), labels.element(1), slot_choice(next_slot_));
    std::vector<ProtocolMessage> out;
    out.push_back(make_msg(StepTag::OtDelivery, PartyId::Client1,
                           PartyId::Master,
                           static_cast<std::uint32_t>(next_slot_),
                           encode_scalar(delivery.value(), q)));
    ++next_slot_;
    if (next_slot_ == config_.ot_slots()) {
      std::vector<std::uint8_t> marker;
      if (config_.variant == Variant::RawPad) {
        marker = encode_elements(state_.pad_shared);
      }
      out.push_back(make_msg(StepTag::PadVector, PartyId::Client1,
                             PartyId::Master, kNoOtIndex, std::move(marker)));
      const std::uint32_t blinded =
          mod_add(w1_key_sum(state_, q), state_.key_blind, q);
      out.push_back(make_msg(StepTag::KeySum, PartyId::Client1,
                             PartyId::Master, kNoOtIndex,
                             encode_scalar(blinded, q)));
      phase_ = Phase::Done;
    }
    return out;
  }
  throw ProtocolError("client 1 received a message after finishing");
}

std::string Client1Party::pending_description() const {
  switch (phase_) {
    case Phase::AwaitMaskedInput:
      return "client1 waiting for the masked input";
    case Phase::AwaitLabels:
      return "client1 waiting for the label pair of slot " +
             std::to_string(next_slot_);
    case Phase::Done:
      return "client1 finished";
  }
  return "client1 in an unknown phase";
}

std::vector<std::uint8_t> Client1Party::preshared_view_bytes() const {
  std::vector<std::uint8_t> out;
  append(out, encode_elements(state_.pad_shared));
  out.insert(out.end(), state_.choice_mask.begin(), state_.choice_mask.end());
  append(out, encode_scalar(state_.key_blind, config_.modulus));
  return out;
}

// --- client 2 ---------------------------------------------------------------

Client2Party::Client2Party(BitVector b, const SessionConfig& config,
                           RandomnessProvider& provider)
    : config_(config) {
  config_.validate();
  if (b.size() != config_.input_length) {
    throw InputError("input length does not match the session configuration");
  }
  const std::uint32_t q = config_.modulus;
  state_.b = std::move(b);
  state_.mask_share =
      draw_fields(provider, Rand::MaskShare2, config_.input_length, q);
  state_.pad_share =
      draw_fields(provider, Rand::PadShare2, config_.pad_length, q);
  state_.xor_mask = draw_bits(provider, Rand::XorMask, config_.input_length);
  if (config_.variant == Variant::NoXorMask) {
    // Drawn anyway so every variant consumes the same randomness inventory.
    std::fill(state_.xor_mask.begin(), state_.xor_mask.end(), 0);
  }
  state_.label_mask =
      draw_fields(provider, Rand::LabelMask, config_.input_length, q);
  state_.pad_shared =
      draw_fields(provider, Rand::PadShared, config_.pad_length, q);
  state_.key_blind = draw_fields(provider, Rand::KeyBlind, 1, q).at(0);
  state_.ot_pad0 = draw_fields(provider, Rand::OtPad0, config_.ot_slots(), q);
  state_.ot_pad1 = draw_fields(provider, Rand::OtPad1, config_.ot_slots(), q);
  auto labels = w2_prepare_labels(state_, q);
  state_.label0 = std::move(labels.first);
  state_.label1 = std::move(labels.second);
}

std::vector<ProtocolMessage> Client2Party::start() {
  return {
      make_msg(StepTag::AdditiveShare, PartyId::Client2, PartyId::Master,
               kNoOtIndex,
               encode_elements(w2_make_additive_share(state_,
                                                      config_.modulus))),
      make_msg(StepTag::XorMaskedInput, PartyId::Client2, PartyId::Client1,
               kNoOtIndex, encode_bit_payload(w2_xor_mask_input(state_))),
  };
}

std::vector<ProtocolMessage> Client2Party::handle(const ProtocolMessage& m) {
  const std::uint32_t q = config_.modulus;
  if (m.to != PartyId::Client2) {
    throw ProtocolError("message delivered to the wrong party");
  }
  if (done()) throw ProtocolError("client 2 received a message after finishing");
  if (m.tag != StepTag::OtMaskedChoice || m.from != PartyId::Client1) {
    throw ProtocolError("client 2 expected a masked choice bit");
  }
  if (m.ot_index != next_slot_) {
    throw ProtocolError("masked choice arrived out of slot order");
  }
  if (m.payload.size() != 1 || m.payload[0] > 1) {
    throw ProtocolError("masked choice payload is not a bit");
  }
  const std::uint8_t masked_choice = m.payload[0];
  const std::size_t slot = next_slot_;
  const bool real = slot < config_.input_length;
  const FieldElement pad_value =
      real ? FieldElement(0, q)
           : state_.pad_shared.element(slot - config_.input_length);
  SenderInput sender{real ? state_.label0.element(slot) : pad_value,
                     real ? state_.label1.element(slot) : pad_value,
                     state_.ot_pad0.element(slot),
                     state_.ot_pad1.element(slot)};
  auto gammas = sender_mask_labels(sender, masked_choice);
  FieldVector payload(2, q);
  payload.set(0, gammas.first.value());
  payload.set(1, gammas.second.value());
  std::vector<ProtocolMessage> out;
  out.push_back(make_msg(StepTag::OtMaskedLabels, PartyId::Client2,
                         PartyId::Client1, static_cast<std::uint32_t>(slot),
                         encode_elements(payload)));
  ++next_slot_;
  if (next_slot_ == config_.ot_slots()) {
    const std::uint32_t blinded = mod_sub(
        w2_key_sum(state_, q, config_.variant), state_.key_blind, q);
    out.push_back(make_msg(StepTag::KeySum, PartyId::Client2, PartyId::Master,
                           kNoOtIndex, encode_scalar(blinded, q)));
  }
  return out;
}

std::string Client2Party::pending_description() const {
  if (done()) return "client2 finished";
  return "client2 waiting for the masked choice of slot " +
         std::to_string(next_slot_);
}

std::vector<std::uint8_t> Client2Party::preshared_view_bytes() const {
  std::vector<std::uint8_t> out;
  append(out, encode_elements(state_.pad_shared));
  append(out, encode_elements(state_.ot_pad0));
  append(out, encode_elements(state_.ot_pad1));
  append(out, encode_scalar(state_.key_blind, config_.modulus));
  return out;
}

// --- master -----------------------------------------------------------------

MasterParty::MasterParty(const SessionConfig& config,
                         RandomnessProvider& provider)
    : config_(config) {
  config_.validate();
  const std::uint32_t q = config_.modulus;
  state_.modulus = q;
  state_.share1 = FieldVector(0, q);
  state_.share2 = FieldVector(0, q);
  state_.summed_shares = FieldVector(0, q);
  state_.unmasked = FieldVector(0, q);
  // The bound is granted by the harness; the message layer never carries it.
  state_.integrity_bound = config_.input_length;
  ot_pad0_ = draw_fields(provider, Rand::OtPad0, config_.ot_slots(), q);
  ot_pad1_ = draw_fields(provider, Rand::OtPad1, config_.ot_slots(), q);
  choice_mask_ = draw_bits(provider, Rand::OtChoiceMask, config_.ot_slots());
}

std::vector<ProtocolMessage> MasterParty::handle(const ProtocolMessage& m) {
  const std::uint32_t q = config_.modulus;
  if (m.to != PartyId::Master) {
    throw ProtocolError("message delivered to the wrong party");
  }
  if (finalized_) throw ProtocolError("master received a message after finishing");
  const unsigned width = field_byte_width(q);
  switch (m.tag) {
    case StepTag::AdditiveShare: {
      if (m.payload.empty() || m.payload.size() % width != 0) {
        throw ProtocolError("additive share payload has a bad length");
      }
      const std::size_t count = m.payload.size() / width;
      FieldVector share = decode_field_payload(m.payload, count, q);
      if (m.from == PartyId::Client1) {
        if (share1_seen_) throw ProtocolError("duplicate share from client 1");
        state_.share1 = std::move(share);
        share1_seen_ = true;
        state_.unmasked = FieldVector(state_.share1.size(), q);
        state_.slot_seen.assign(state_.share1.size(), false);
      } else if (m.from == PartyId::Client2) {
        if (share2_seen_) throw ProtocolError("duplicate share from client 2");
        state_.share2 = std::move(share);
        share2_seen_ = true;
      } else {
        throw ProtocolError("additive share from an unexpected party");
      }
      if (share1_seen_ && share2_seen_) {
        state_.summed_shares = master_sum_shares(state_.share1, state_.share2);
      }
      break;
    }
    case StepTag::OtDelivery: {
      if (m.from != PartyId::Client1) {
        throw ProtocolError("delivery from an unexpected party");
      }
      if (!share1_seen_ || pad_marker_seen_) {
        throw ProtocolError("delivery arrived outside the transfer phase");
      }
      if (m.ot_index == kNoOtIndex || m.ot_index >= ot_pad0_.size()) {
        throw ProtocolError("delivery slot index out of range");
      }
      if (m.ot_index >= state_.slot_seen.size() ||
          state_.slot_seen[m.ot_index]) {
        throw ProtocolError("duplicate or out-of-range delivery slot");
      }
      FieldVector value = decode_field_payload(m.payload, 1, q);
      ReceiverShared shared{ot_pad0_.element(m.ot_index),
                            ot_pad1_.element(m.ot_index),
                            choice_mask_[m.ot_index]};
      const FieldElement unmasked = receiver_unmask(value.element(0), shared);
      state_.unmasked.set(m.ot_index, unmasked.value());
      state_.slot_seen[m.ot_index] = true;
      ++deliveries_seen_;
      break;
    }
    case StepTag::PadVector: {
      if (m.from != PartyId::Client1) {
        throw ProtocolError("pad marker from an unexpected party");
      }
      if (!share1_seen_ || pad_marker_seen_) {
        throw ProtocolError("pad marker arrived out of order");
      }
      if (config_.variant == Variant::RawPad) {
        if (m.payload.empty() || m.payload.size() % width != 0) {
          throw ProtocolError("pad payload has a bad length");
        }
        const std::size_t count = m.payload.size() / width;
        FieldVector pads = decode_field_payload(m.payload, count, q);
        std::size_t next = 0;
        for (std::size_t i = 0; i < state_.slot_seen.size(); ++i) {
          if (state_.slot_seen[i]) continue;
          if (next >= pads.size()) {
            throw ProtocolError("pad payload is shorter than the uncovered slots");
          }
          state_.unmasked.set(i, pads.at(next++));
          state_.slot_seen[i] = true;
        }
        if (next != pads.size()) {
          throw ProtocolError("pad payload is longer than the uncovered slots");
        }
      } else if (!m.payload.empty()) {
        throw ProtocolError("pad marker must be empty");
      }
      pad_marker_seen_ = true;
      break;
    }
    case StepTag::KeySum: {
      FieldVector value = decode_field_payload(m.payload, 1, q);
      if (m.from == PartyId::Client1) {
        if (!pad_marker_seen_ || key_sum1_seen_) {
          throw ProtocolError("key sum from client 1 arrived out of order");
        }
        state_.key_sum_payload1 = value.at(0);
        key_sum1_seen_ = true;
      } else if (m.from == PartyId::Client2) {
        if (!share2_seen_ || key_sum2_seen_) {
          throw ProtocolError("key sum from client 2 arrived out of order");
        }
        state_.key_sum_payload2 = value.at(0);
        key_sum2_seen_ = true;
      } else {
        throw ProtocolError("key sum from an unexpected party");
      }
      break;
    }
    default:
      throw ProtocolError("master received an unexpected message tag");
  }
  maybe_finalize();
  return {};
}

void MasterParty::maybe_finalize() {
  if (finalized_) return;
  if (!share1_seen_ || !share2_seen_ || !pad_marker_seen_ || !key_sum1_seen_ ||
      !key_sum2_seen_) {
    return;
  }
  for (bool seen : state_.slot_seen) {
    if (!seen) throw ProtocolError("a slot was never covered by the transfer phase");
  }
  finalized_ = true;
  try {
    master_finalize(state_);
    integrity_ok_ = true;
  } catch (const IntegrityError& e) {
    integrity_ok_ = false;
    integrity_message_ = e.what();
  }
}

std::uint64_t MasterParty::result() const {
  if (!finalized_) throw ProtocolError("the session has not finished");
  if (!integrity_ok_) throw IntegrityError(integrity_message_);
  return state_.result;
}

std::string MasterParty::pending_description() const {
  if (finalized_) return "master finished";
  std::string out = "master waiting for";
  if (!share1_seen_) out += " share1";
  if (!share2_seen_) out += " share2";
  if (share1_seen_ && deliveries_seen_ < state_.slot_seen.size() &&
      !pad_marker_seen_) {
    out += " deliveries";
  }
  if (!pad_marker_seen_) out += " pad-marker";
  if (!key_sum1_seen_) out += " keysum1";
  if (!key_sum2_seen_) out += " keysum2";
  return out;
}

std::vector<std::uint8_t> MasterParty::preshared_view_bytes() const {
  std::vector<std::uint8_t> out;
  append(out, encode_elements(ot_pad0_));
  append(out, encode_elements(ot_pad1_));
  out.insert(out.end(), choice_mask_.begin(), choice_mask_.end());
  return out;
}

}  // namespace bimpc

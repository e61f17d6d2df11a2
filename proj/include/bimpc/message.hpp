#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace bimpc {

enum class PartyId : std::uint8_t {
  Master = 0,
  Client1 = 1,
  Client2 = 2,
};

enum class StepTag : std::uint8_t {
  AdditiveShare = 1,   // client -> master, masked input plus chaff, n+n' entries
  XorMaskedInput = 2,  // client 2 -> client 1, b XOR k2m, n bits
  OtMaskedChoice = 3,  // client 1 -> client 2, one masked choice bit per slot
  OtMaskedLabels = 4,  // client 2 -> client 1, the padded label pair
  OtDelivery = 5,      // client 1 -> master, the forwarded label
  PadVector = 6,       // client 1 -> master, empty end-of-phase marker
  KeySum = 7,          // client -> master, blinded key sum scalar
};

std::string_view tag_name(StepTag tag);
std::string_view party_name(PartyId id);

/// Marks messages that belong to no oblivious-transfer slot.
inline constexpr std::uint32_t kNoOtIndex = 0xFFFFFFFFu;

struct ProtocolMessage {
  StepTag tag;
  PartyId from;
  PartyId to;
  std::uint32_t ot_index = kNoOtIndex;
  std::vector<std::uint8_t> payload;

  bool operator==(const ProtocolMessage& o) const = default;
};

/// Wire layout: tag (1 byte), from (1), to (1), OT index (4, little endian,
/// 0xFFFFFFFF when unused), payload length (4, little endian), payload bytes.
std::vector<std::uint8_t> encode_message(const ProtocolMessage& m);

/// Decodes exactly one message occupying the whole buffer.
ProtocolMessage decode_message(const std::vector<std::uint8_t>& bytes);

}  // namespace bimpc

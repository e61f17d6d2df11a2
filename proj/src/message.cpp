#include "bimpc/message.hpp"

#include "bimpc/errors.hpp"

namespace bimpc {

std::string_view tag_name(StepTag tag) {
  switch (tag) {
    case StepTag::AdditiveShare: return "AdditiveShare";
    case StepTag::XorMaskedInput: return "XorMaskedInput";
    case StepTag::OtMaskedChoice: return "OtMaskedChoice";
    case StepTag::OtMaskedLabels: return "OtMaskedLabels";
    case StepTag::OtDelivery: return "OtDelivery";
    case StepTag::PadVector: return "PadVector";
    case StepTag::KeySum: return "KeySum";
  }
  return "Unknown";
}

std::string_view party_name(PartyId id) {
  switch (id) {
    case PartyId::Master: return "master";
    case PartyId::Client1: return "client1";
    case PartyId::Client2: return "client2";
  }
  return "unknown";
}

namespace {

void put_u32le(std::vector<std::uint8_t>& out, std::uint32_t x) {
  for (unsigned b = 0; b < 4; ++b) {
    out.push_back(static_cast<std::uint8_t>(x >> (8 * b)));
  }
}

std::uint32_t get_u32le(const std::vector<std::uint8_t>& bytes,
                        std::size_t at) {
  std::uint32_t x = 0;
  for (unsigned b = 0; b < 4; ++b) {
    x |= std::uint32_t{bytes[at + b]} << (8 * b);
  }
  return x;
}

bool valid_tag(std::uint8_t t) {
  return t >= static_cast<std::uint8_t>(StepTag::AdditiveShare) &&
         t <= static_cast<std::uint8_t>(StepTag::KeySum);
}

bool valid_party(std::uint8_t p) { return p <= 2; }

}  // namespace

std::vector<std::uint8_t> encode_message(const ProtocolMessage& m) {
  std::vector<std::uint8_t> out;
  out.reserve(11 + m.payload.size());
  out.push_back(static_cast<std::uint8_t>(m.tag));
  out.push_back(static_cast<std::uint8_t>(m.from));
  out.push_back(static_cast<std::uint8_t>(m.to));
  put_u32le(out, m.ot_index);
  put_u32le(out, static_cast<std::uint32_t>(m.payload.size()));
  out.insert(out.end(), m.payload.begin(), m.payload.end());
  return out;
}

ProtocolMessage decode_message(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 11) {
    throw InputError("message truncated before header end");
  }
  if (!valid_tag(bytes[0])) {
    throw InputError("unknown step tag " + std::to_string(bytes[0]));
  }
  if (!valid_party(bytes[1]) || !valid_party(bytes[2])) {
    throw InputError("unknown party id");
  }
  std::uint32_t len = get_u32le(bytes, 7);
  if (bytes.size() != std::size_t{11} + len) {
    throw InputError("payload length field disagrees with buffer size");
  }
  ProtocolMessage m;
  m.tag = static_cast<StepTag>(bytes[0]);
  m.from = static_cast<PartyId>(bytes[1]);
  m.to = static_cast<PartyId>(bytes[2]);
  m.ot_index = get_u32le(bytes, 3);
  m.payload.assign(bytes.begin() + 11, bytes.end());
  return m;
}

}  // namespace bimpc

#include "bimpc/triot.hpp"

#include "bimpc/errors.hpp"

namespace bimpc {

namespace {

std::uint8_t require_bit(std::uint8_t b, const char* what) {
  if (b > 1) throw InputError(std::string(what) + " must be 0 or 1");
  return b;
}

}  // namespace

std::uint8_t selector_mask_choice(std::uint8_t choice,
                                  std::uint8_t shared_mask) {
  return require_bit(choice, "choice") ^ require_bit(shared_mask, "mask");
}

std::pair<FieldElement, FieldElement> sender_mask_labels(
    const SenderInput& sender, std::uint8_t masked_choice) {
  require_bit(masked_choice, "masked choice");
  const FieldElement& first = masked_choice ? sender.pad1 : sender.pad0;
  const FieldElement& second = masked_choice ? sender.pad0 : sender.pad1;
  return {sender.label0 + first, sender.label1 + second};
}

FieldElement selector_forward(const FieldElement& gamma0,
                              const FieldElement& gamma1,
                              std::uint8_t choice) {
  return require_bit(choice, "choice") ? gamma1 : gamma0;
}

FieldElement receiver_unmask(const FieldElement& delivery,
                             const ReceiverShared& receiver) {
  require_bit(receiver.shared_mask, "mask");
  return delivery - (receiver.shared_mask ? receiver.pad1 : receiver.pad0);
}

TriOtTrace run_triot_instance(const SelectorInput& selector,
                              const SenderInput& sender,
                              const ReceiverShared& receiver) {
  if (sender.pad0 != receiver.pad0 || sender.pad1 != receiver.pad1) {
    throw ProtocolError("sender and receiver disagree on shared pads");
  }
  if (selector.shared_mask != receiver.shared_mask) {
    throw ProtocolError("selector and receiver disagree on the mask bit");
  }
  std::uint8_t mc = selector_mask_choice(selector.choice, selector.shared_mask);
  auto [g0, g1] = sender_mask_labels(sender, mc);
  FieldElement delivery = selector_forward(g0, g1, selector.choice);
  FieldElement result = receiver_unmask(delivery, receiver);
  return TriOtTrace{mc, g0, g1, delivery, result};
}

}  // namespace bimpc

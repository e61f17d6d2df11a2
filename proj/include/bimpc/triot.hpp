#pragma once

#include <cstdint>
#include <utility>

#include "bimpc/field.hpp"

namespace bimpc {

// Three-party oblivious transfer. The selector holds a choice bit and wants
// nothing; the receiver should end up with the label the choice bit picks,
// without learning the bit; the sender contributes the two labels without
// learning which one was delivered. The selector and receiver pre-share a
// mask bit k_m, the sender and receiver pre-share one-time pads (alpha_0,
// alpha_1). Three messages flow: the masked choice, the two padded labels,
// and the forwarded delivery.

/// Selector's inputs: the real choice bit and the mask shared with the
/// receiver.
struct SelectorInput {
  std::uint8_t choice;      // m'
  std::uint8_t shared_mask; // k_m
};

/// Sender's inputs: the two labels and the pads shared with the receiver.
struct SenderInput {
  FieldElement label0;
  FieldElement label1;
  FieldElement pad0;
  FieldElement pad1;
};

/// Receiver's pre-shared state: both pads and the selector-side mask bit.
struct ReceiverShared {
  FieldElement pad0;
  FieldElement pad1;
  std::uint8_t shared_mask; // k_m
};

/// Message 1, selector -> sender: choice XOR shared mask.
std::uint8_t selector_mask_choice(std::uint8_t choice,
                                  std::uint8_t shared_mask);

/// Message 2, sender -> selector: (label0 + pad[mc], label1 + pad[1-mc]).
/// Both padded labels travel together.
std::pair<FieldElement, FieldElement> sender_mask_labels(
    const SenderInput& sender, std::uint8_t masked_choice);

/// Message 3, selector -> receiver: the padded label its real bit selects.
FieldElement selector_forward(const FieldElement& gamma0,
                              const FieldElement& gamma1, std::uint8_t choice);

/// Receiver output: delivery minus the pad its mask bit selects.
FieldElement receiver_unmask(const FieldElement& delivery,
                             const ReceiverShared& receiver);

/// The three messages of one instance, in flow order, plus the result.
struct TriOtTrace {
  std::uint8_t masked_choice;
  FieldElement gamma0;
  FieldElement gamma1;
  FieldElement delivery;
  FieldElement result;
};

/// Runs one instance end to end. Throws ProtocolError if the sender's and
/// receiver's copies of the shared pads or the selector's and receiver's
/// mask bits disagree (a test-harness-only check; real parties cannot see
/// each other's state).
TriOtTrace run_triot_instance(const SelectorInput& selector,
                              const SenderInput& sender,
                              const ReceiverShared& receiver);

}  // namespace bimpc

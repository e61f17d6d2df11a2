#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bimpc/bits.hpp"
#include "bimpc/doma.hpp"
#include "bimpc/triot.hpp"

namespace bimpc {

struct SuiteResult {
  std::string name;
  bool passed = true;
  std::uint64_t cases = 0;
  std::string failure;  // first counterexample, empty when passed
};

using AndFn = std::function<BitVector(const std::vector<BitVector>&)>;
using DotFn = std::function<std::uint64_t(const BitVector&, const BitVector&)>;
using TriotFn = std::function<TriOtTrace(
    const SelectorInput&, const SenderInput&, const ReceiverShared&)>;

/// Conjunction and dot product against direct oracles: exhaustive over all
/// input tuples while 2^(l*n) stays small, seeded random samples beyond.
/// Empty callables mean the real implementations; tests inject broken ones
/// to prove the sweep catches them.
SuiteResult run_doma_sweep(std::uint64_t seed = 1, const AndFn& and_fn = {},
                           const DotFn& dot_fn = {});

/// Every transfer input combination at one small modulus: labels and pads
/// over the full field, both choice and mask bits.
SuiteResult run_triot_exhaustive(std::uint32_t q = 5,
                                 const TriotFn& triot_fn = {});

/// Randomized full sessions across lengths, paddings, moduli and all three
/// schedulers, checking the reconstructed dot product every time.
SuiteResult run_e2e_randomized(std::uint64_t seed = 1,
                               std::size_t sessions = 100);

std::vector<SuiteResult> run_all_selfchecks(std::uint64_t seed = 1);

}  // namespace bimpc

#include "bimpc/selfcheck.hpp"

#include <bit>

#include "bimpc/errors.hpp"
#include "bimpc/field.hpp"
#include "bimpc/harness.hpp"
#include "bimpc/prg.hpp"

namespace bimpc {

namespace {

std::uint64_t uniform_below(RandomStream& stream, std::uint64_t k) {
  if (k <= 1) return 0;
  const unsigned bits = static_cast<unsigned>(std::bit_width(k - 1));
  for (;;) {
    const std::uint64_t v = stream.draw_block(bits);
    if (v < k) return v;
  }
}

std::string tuple_text(const std::vector<BitVector>& inputs) {
  std::string out = "(";
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (i != 0) out += ",";
    out += inputs[i].to_string();
  }
  return out + ")";
}

BitVector direct_and(const std::vector<BitVector>& inputs) {
  BitVector out = BitVector::zeros(inputs[0].size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint8_t all = 1;
    for (const BitVector& v : inputs) all &= v.at(i);
    out.set(i, all);
  }
  return out;
}

bool check_and_case(const AndFn& and_fn, const DotFn& dot_fn,
                    const std::vector<BitVector>& inputs,
                    SuiteResult& result) {
  ++result.cases;
  const BitVector got = and_fn(inputs);
  const BitVector want = direct_and(inputs);
  if (!(got == want)) {
    result.passed = false;
    result.failure = "conjunction of " + tuple_text(inputs) + " gave " +
                     got.to_string() + ", oracle says " + want.to_string();
    return false;
  }
  if (inputs.size() == 2) {
    ++result.cases;
    const std::uint64_t dot_got = dot_fn(inputs[0], inputs[1]);
    const std::uint64_t dot_want = brute_force_dot(inputs[0], inputs[1]);
    if (dot_got != dot_want) {
      result.passed = false;
      result.failure = "dot of " + tuple_text(inputs) + " gave " +
                       std::to_string(dot_got) + ", oracle says " +
                       std::to_string(dot_want);
      return false;
    }
  }
  return true;
}

}  // namespace

SuiteResult run_doma_sweep(std::uint64_t seed, const AndFn& and_fn,
                           const DotFn& dot_fn) {
  const AndFn conj = and_fn
                         ? and_fn
                         : AndFn([](const std::vector<BitVector>& inputs) {
                             return and_via_modadd(inputs).conjunction;
                           });
  const DotFn dot = dot_fn ? dot_fn : DotFn(dot_via_modadd);

  SuiteResult result;
  result.name = "doma-sweep";
  SeededStream rng(splitmix64_mix(seed ^ fnv1a64("doma-sweep")));
  for (std::size_t l = 2; l <= 5; ++l) {
    for (std::size_t n = 1; n <= 8; ++n) {
      const std::size_t total_bits = l * n;
      if (total_bits <= 16) {
        const std::uint64_t combos = std::uint64_t{1} << total_bits;
        for (std::uint64_t word = 0; word < combos; ++word) {
          std::vector<BitVector> inputs;
          inputs.reserve(l);
          for (std::size_t v = 0; v < l; ++v) {
            BitVector bits = BitVector::zeros(n);
            for (std::size_t i = 0; i < n; ++i) {
              bits.set(i, static_cast<std::uint8_t>(
                              (word >> (v * n + i)) & 1));
            }
            inputs.push_back(std::move(bits));
          }
          if (!check_and_case(conj, dot, inputs, result)) return result;
        }
      } else {
        for (std::size_t sample = 0; sample < 10000; ++sample) {
          std::vector<BitVector> inputs;
          inputs.reserve(l);
          for (std::size_t v = 0; v < l; ++v) {
            BitVector bits = BitVector::zeros(n);
            for (std::size_t i = 0; i < n; ++i) {
              bits.set(i, static_cast<std::uint8_t>(rng.draw_block(1)));
            }
            inputs.push_back(std::move(bits));
          }
          if (!check_and_case(conj, dot, inputs, result)) return result;
        }
      }
    }
  }
  return result;
}

SuiteResult run_triot_exhaustive(std::uint32_t q, const TriotFn& triot_fn) {
  const TriotFn runner = triot_fn ? triot_fn : TriotFn(run_triot_instance);
  SuiteResult result;
  result.name = "triot-exhaustive-q" + std::to_string(q);
  validate_modulus(q);
  for (std::uint32_t label0 = 0; label0 < q; ++label0) {
    for (std::uint32_t label1 = 0; label1 < q; ++label1) {
      for (std::uint32_t pad0 = 0; pad0 < q; ++pad0) {
        for (std::uint32_t pad1 = 0; pad1 < q; ++pad1) {
          for (std::uint8_t choice = 0; choice < 2; ++choice) {
            for (std::uint8_t mask = 0; mask < 2; ++mask) {
              ++result.cases;
              const SenderInput sender{
                  FieldElement(label0, q), FieldElement(label1, q),
                  FieldElement(pad0, q), FieldElement(pad1, q)};
              const SelectorInput selector{choice, mask};
              const ReceiverShared receiver{FieldElement(pad0, q),
                                            FieldElement(pad1, q), mask};
              const TriOtTrace trace = runner(selector, sender, receiver);
              const FieldElement want =
                  choice != 0 ? sender.label1 : sender.label0;
              const FieldElement mask_pad =
                  mask != 0 ? sender.pad1 : sender.pad0;
              const bool delivery_ok = trace.delivery == want + mask_pad;
              if (trace.result == want && delivery_ok) continue;
              result.passed = false;
              result.failure =
                  "labels (" + std::to_string(label0) + "," +
                  std::to_string(label1) + ") pads (" + std::to_string(pad0) +
                  "," + std::to_string(pad1) + ") choice " +
                  std::to_string(choice) + " mask " + std::to_string(mask) +
                  ": result " + std::to_string(trace.result.value()) +
                  ", delivery " + std::to_string(trace.delivery.value()) +
                  ", wanted label " + std::to_string(want.value());
              return result;
            }
          }
        }
      }
    }
  }
  return result;
}

SuiteResult run_e2e_randomized(std::uint64_t seed, std::size_t sessions) {
  SuiteResult result;
  result.name = "e2e-randomized";
  SeededStream rng(splitmix64_mix(seed ^ fnv1a64("e2e-randomized")));
  for (std::size_t i = 0; i < sessions; ++i) {
    SessionConfig config;
    config.input_length = 1 + uniform_below(rng, 6);
    config.pad_length = uniform_below(rng, 4);
    config.modulus = smallest_prime_above(2 * config.input_length +
                                          uniform_below(rng, 5));
    config.seeds = SeedSet::derive(rng.draw_block(64));
    config.session_id = "selftest-" + std::to_string(i);

    BitVector a = BitVector::zeros(config.input_length);
    BitVector b = BitVector::zeros(config.input_length);
    for (std::size_t j = 0; j < config.input_length; ++j) {
      a.set(j, static_cast<std::uint8_t>(rng.draw_block(1)));
      b.set(j, static_cast<std::uint8_t>(rng.draw_block(1)));
    }

    RunOptions opts;
    opts.scheduler = i % 3 == 0   ? SchedulerKind::Canonical
                     : i % 3 == 1 ? SchedulerKind::SeedInterleaved
                                  : SchedulerKind::Threaded;
    opts.interleave_seed = rng.draw_block(64);

    const std::uint64_t want = brute_force_dot(a, b);
    std::string problem;
    try {
      const SessionOutcome out = run_session(a, b, config, opts);
      if (!out.integrity_ok) {
        problem = "integrity failure: " + out.integrity_message;
      } else if (out.y != want) {
        problem = "reconstructed " + std::to_string(out.y) + ", wanted " +
                  std::to_string(want);
      } else {
        // Mask cancellation: sum(s'' - m'') - ks1 - ks2 = 2y in the field.
        const std::uint32_t q = config.modulus;
        std::uint32_t acc = 0;
        for (std::size_t s = 0; s < out.master.summed_shares.size(); ++s) {
          acc = mod_add(acc,
                        mod_sub(out.master.summed_shares.at(s),
                                out.master.unmasked.at(s), q),
                        q);
        }
        acc = mod_sub(acc,
                      mod_add(out.master.key_sum_payload1,
                              out.master.key_sum_payload2, q),
                      q);
        if (acc != mod_mul(2, static_cast<std::uint32_t>(want), q)) {
          problem = "mask cancellation residue " + std::to_string(acc) +
                    " does not equal 2y";
        }
      }
    } catch (const std::exception& e) {
      problem = std::string("exception: ") + e.what();
    }
    ++result.cases;
    if (!problem.empty()) {
      result.passed = false;
      result.failure = "session " + std::to_string(i) + " (n=" +
                       std::to_string(config.input_length) + " pad=" +
                       std::to_string(config.pad_length) + " q=" +
                       std::to_string(config.modulus) +
                       " a=" + a.to_string() + " b=" + b.to_string() +
                       "): " + problem;
      return result;
    }
  }
  return result;
}

std::vector<SuiteResult> run_all_selfchecks(std::uint64_t seed) {
  return {run_doma_sweep(seed), run_triot_exhaustive(),
          run_e2e_randomized(seed)};
}

}  // namespace bimpc

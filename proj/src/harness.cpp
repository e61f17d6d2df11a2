#include "bimpc/harness.hpp"

#include <atomic>
#include <bit>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <ostream>
#include <thread>
#include <utility>

#include "bimpc/errors.hpp"
#include "bimpc/field.hpp"
#include "bimpc/prg.hpp"

namespace bimpc {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
  out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xFF));
  out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xFF));
}

std::uint64_t uniform_below(RandomStream& stream, std::uint64_t k) {
  if (k <= 1) return 0;
  const unsigned bits = static_cast<unsigned>(std::bit_width(k - 1));
  for (;;) {
    const std::uint64_t v = stream.draw_block(bits);
    if (v < k) return v;
  }
}

}  // namespace

std::string StreamLabel::to_string() const {
  return session + "/" + purpose + "/" + std::to_string(index);
}

SeededStream RandomnessSource::derive(const StreamLabel& label) {
  const std::string text = label.to_string();
  const std::uint64_t key = fnv1a64(text);
  auto [it, inserted] = issued_.emplace(key, text);
  if (!inserted && it->second != text) {
    throw ConfigError("stream label collision: '" + text + "' against '" +
                      it->second + "'");
  }
  return SeededStream(splitmix64_mix(root_ ^ key));
}

SeededStream derive_stream(RandomnessSource& source, const StreamLabel& label) {
  return source.derive(label);
}

SeededProvider::SeededProvider(const SessionConfig& config)
    : session_(config.session_id),
      modulus_(config.modulus),
      client1_private_(config.seeds.client1_private),
      client2_private_(config.seeds.client2_private),
      clients_shared_(config.seeds.clients_shared),
      client1_master_(config.seeds.client1_master),
      client2_master_(config.seeds.client2_master) {}

RandomnessSource& SeededProvider::source_for(Rand purpose) {
  switch (purpose) {
    case Rand::MaskShare1:
    case Rand::PadShare1:
      return client1_private_;
    case Rand::MaskShare2:
    case Rand::PadShare2:
    case Rand::LabelMask:
    case Rand::XorMask:
      return client2_private_;
    case Rand::PadShared:
    case Rand::KeyBlind:
      return clients_shared_;
    case Rand::OtChoiceMask:
      return client1_master_;
    case Rand::OtPad0:
    case Rand::OtPad1:
      return client2_master_;
  }
  throw ConfigError("unknown randomness purpose");
}

std::uint32_t SeededProvider::field_value(Rand purpose, std::size_t index) {
  if (rand_is_bit(purpose)) {
    throw ConfigError("field draw requested from a bit-valued purpose");
  }
  SeededStream stream = source_for(purpose).derive(
      {session_, std::string(rand_name(purpose)), index});
  return sample_uniform(stream, modulus_);
}

std::uint8_t SeededProvider::bit_value(Rand purpose, std::size_t index) {
  if (!rand_is_bit(purpose)) {
    throw ConfigError("bit draw requested from a field-valued purpose");
  }
  SeededStream stream = source_for(purpose).derive(
      {session_, std::string(rand_name(purpose)), index});
  return static_cast<std::uint8_t>(stream.draw_block(1));
}

std::uint32_t CountingProvider::record(Rand purpose, std::size_t index) {
  const auto key = std::make_pair(static_cast<std::uint8_t>(purpose),
                                  static_cast<std::uint64_t>(index));
  if (seen_.emplace(key, true).second) schedule_.emplace_back(purpose, index);
  return 0;
}

std::uint32_t CountingProvider::field_value(Rand purpose, std::size_t index) {
  if (rand_is_bit(purpose)) {
    throw ConfigError("field draw requested from a bit-valued purpose");
  }
  return record(purpose, index);
}

std::uint8_t CountingProvider::bit_value(Rand purpose, std::size_t index) {
  if (!rand_is_bit(purpose)) {
    throw ConfigError("bit draw requested from a field-valued purpose");
  }
  return static_cast<std::uint8_t>(record(purpose, index));
}

std::uint64_t CountingProvider::field_draws() const {
  std::uint64_t count = 0;
  for (const auto& entry : schedule_) {
    if (!rand_is_bit(entry.first)) ++count;
  }
  return count;
}

std::uint64_t CountingProvider::bit_draws() const {
  std::uint64_t count = 0;
  for (const auto& entry : schedule_) {
    if (rand_is_bit(entry.first)) ++count;
  }
  return count;
}

// --- transcripts and views ----------------------------------------------------

std::vector<std::uint8_t> transcript_bytes(const Transcript& t) {
  std::vector<std::uint8_t> out;
  for (const auto& record : t.records) {
    const auto piece = encode_message(record.message);
    out.insert(out.end(), piece.begin(), piece.end());
  }
  return out;
}

void append_view_record(std::vector<std::uint8_t>& out, PartyId from,
                        StepTag tag, std::uint32_t ot_index,
                        const std::vector<std::uint8_t>& payload) {
  out.push_back(static_cast<std::uint8_t>(from));
  out.push_back(static_cast<std::uint8_t>(tag));
  put_u32(out, ot_index);
  put_u32(out, static_cast<std::uint32_t>(payload.size()));
  out.insert(out.end(), payload.begin(), payload.end());
}

std::vector<std::uint8_t> project_view(const Transcript& t, PartyId party) {
  const auto idx = static_cast<std::size_t>(party);
  if (idx >= 3) throw InputError("unknown party");
  std::vector<std::uint8_t> out;
  for (const auto& record : t.records) {
    const ProtocolMessage& m = record.message;
    if (m.to != party) continue;
    append_view_record(out, m.from, m.tag, m.ot_index, m.payload);
  }
  out.push_back(kViewSeparator);
  out.insert(out.end(), t.preshared[idx].begin(), t.preshared[idx].end());
  return out;
}

std::string to_hex(const std::vector<std::uint8_t>& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xF]);
  }
  return out;
}

void dump_transcript(const Transcript& t, std::ostream& os, bool debug) {
  os << "bimpc transcript\n";
  os << "session: " << t.config.session_id << "\n";
  os << "modulus: " << t.config.modulus << "\n";
  os << "entries: " << t.config.total_length() << "\n";
  if (debug) {
    os << "input-length: " << t.config.input_length << "\n";
    os << "variant: " << variant_name(t.config.variant) << "\n";
  }
  os << "messages: " << t.records.size() << "\n";
  for (const auto& record : t.records) {
    const ProtocolMessage& m = record.message;
    os << record.index << " " << party_name(m.from) << " -> "
       << party_name(m.to) << " " << tag_name(m.tag) << " slot=";
    if (m.ot_index == kNoOtIndex) {
      os << "-";
    } else {
      os << m.ot_index;
    }
    os << " payload=" << (m.payload.empty() ? "-" : to_hex(m.payload)) << "\n";
  }
}

// --- schedulers -----------------------------------------------------------------

namespace {

std::array<Party*, 3> index_parties(const std::vector<Party*>& parties) {
  std::array<Party*, 3> by_id{nullptr, nullptr, nullptr};
  for (Party* p : parties) {
    if (p == nullptr) throw HarnessError("null party handed to the scheduler");
    const auto idx = static_cast<std::size_t>(p->id());
    if (by_id[idx] != nullptr) {
      throw HarnessError("two parties claim the same id");
    }
    by_id[idx] = p;
  }
  return by_id;
}

void check_all_done(const std::vector<Party*>& parties) {
  std::string stalled;
  for (Party* p : parties) {
    if (p->done()) continue;
    if (!stalled.empty()) stalled += "; ";
    stalled += p->pending_description();
  }
  if (!stalled.empty()) {
    throw HarnessError("delivery went quiescent with pending parties: " +
                       stalled);
  }
}

void run_threaded(const std::vector<Party*>& parties,
                  std::vector<ProtocolMessage> initial,
                  Transcript& transcript) {
  const std::array<Party*, 3> by_id = index_parties(parties);
  for (Party* p : by_id) {
    if (p == nullptr) throw HarnessError("threaded delivery needs all three parties");
  }

  struct Mailbox {
    std::mutex mutex;
    std::condition_variable ready;
    std::deque<ProtocolMessage> queue;
  };
  std::array<Mailbox, 3> boxes;
  std::mutex transcript_mutex;
  std::uint64_t next_index = transcript.records.size();
  std::atomic<bool> failed{false};
  std::array<std::exception_ptr, 3> errors{};

  auto post = [&boxes](ProtocolMessage m) {
    Mailbox& box = boxes[static_cast<std::size_t>(m.to)];
    {
      std::lock_guard<std::mutex> guard(box.mutex);
      box.queue.push_back(std::move(m));
    }
    box.ready.notify_one();
  };
  for (auto& m : initial) post(std::move(m));

  auto worker = [&](std::size_t idx) {
    Party* party = by_id[idx];
    Mailbox& box = boxes[idx];
    try {
      while (!party->done()) {
        ProtocolMessage msg;
        {
          std::unique_lock<std::mutex> lock(box.mutex);
          const bool woke = box.ready.wait_for(
              lock, std::chrono::seconds(10),
              [&] { return !box.queue.empty() || failed.load(); });
          if (failed.load() && box.queue.empty()) return;
          if (!woke) {
            throw HarnessError("threaded delivery stalled: " +
                               party->pending_description());
          }
          msg = std::move(box.queue.front());
          box.queue.pop_front();
        }
        {
          std::lock_guard<std::mutex> guard(transcript_mutex);
          transcript.records.push_back({next_index++, msg});
        }
        auto emissions = party->handle(msg);
        for (auto& e : emissions) post(std::move(e));
      }
    } catch (...) {
      errors[idx] = std::current_exception();
      failed.store(true);
      for (Mailbox& b : boxes) b.ready.notify_all();
    }
  };

  std::array<std::thread, 3> threads;
  for (std::size_t i = 0; i < 3; ++i) {
    threads[i] = std::thread(worker, i);
  }
  for (auto& t : threads) t.join();

  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (Mailbox& box : boxes) {
    if (!box.queue.empty()) {
      throw HarnessError("undelivered messages remained after all parties finished");
    }
  }
  check_all_done(parties);
}

}  // namespace

void deliver_until_quiescent(const std::vector<Party*>& parties,
                             std::vector<ProtocolMessage> initial,
                             Transcript& transcript, SchedulerKind scheduler,
                             std::uint64_t interleave_seed) {
  if (scheduler == SchedulerKind::Threaded) {
    run_threaded(parties, std::move(initial), transcript);
    return;
  }
  const std::array<Party*, 3> by_id = index_parties(parties);

  const bool canonical = scheduler == SchedulerKind::Canonical;
  std::deque<ProtocolMessage> global;
  std::map<std::pair<std::uint8_t, std::uint8_t>, std::deque<ProtocolMessage>>
      channels;
  SeededStream picker(splitmix64_mix(interleave_seed ^ fnv1a64("interleave")));

  auto enqueue = [&](ProtocolMessage m) {
    if (canonical) {
      global.push_back(std::move(m));
    } else {
      channels[{static_cast<std::uint8_t>(m.from),
                static_cast<std::uint8_t>(m.to)}]
          .push_back(std::move(m));
    }
  };
  for (auto& m : initial) enqueue(std::move(m));

  std::uint64_t next_index = transcript.records.size();
  for (;;) {
    ProtocolMessage msg;
    if (canonical) {
      if (global.empty()) break;
      msg = std::move(global.front());
      global.pop_front();
    } else {
      std::vector<decltype(channels.begin())> nonempty;
      for (auto it = channels.begin(); it != channels.end(); ++it) {
        if (!it->second.empty()) nonempty.push_back(it);
      }
      if (nonempty.empty()) break;
      auto& queue = nonempty[uniform_below(picker, nonempty.size())]->second;
      msg = std::move(queue.front());
      queue.pop_front();
    }
    Party* target = by_id[static_cast<std::size_t>(msg.to)];
    if (target == nullptr) {
      throw HarnessError("message addressed to an absent party: " +
                         std::string(party_name(msg.to)));
    }
    transcript.records.push_back({next_index++, std::move(msg)});
    auto emissions = target->handle(transcript.records.back().message);
    for (auto& e : emissions) enqueue(std::move(e));
  }
  check_all_done(parties);
}

SessionOutcome run_session_with_provider(const BitVector& a,
                                         const BitVector& b,
                                         const SessionConfig& config,
                                         RandomnessProvider& provider,
                                         RunOptions opts) {
  config.validate();
  Client1Party client1(a, config, provider);
  Client2Party client2(b, config, provider);
  MasterParty master(config, provider);

  SessionOutcome out;
  out.transcript.config = config;

  std::vector<ProtocolMessage> initial = client1.start();
  for (auto& m : client2.start()) initial.push_back(std::move(m));

  deliver_until_quiescent({&client1, &client2, &master}, std::move(initial),
                          out.transcript, opts.scheduler,
                          opts.interleave_seed);

  out.transcript.preshared[static_cast<std::size_t>(PartyId::Master)] =
      master.preshared_view_bytes();
  out.transcript.preshared[static_cast<std::size_t>(PartyId::Client1)] =
      client1.preshared_view_bytes();
  out.transcript.preshared[static_cast<std::size_t>(PartyId::Client2)] =
      client2.preshared_view_bytes();
  out.master = master.state();
  try {
    out.y = master.result();
    out.integrity_ok = true;
  } catch (const IntegrityError& e) {
    out.integrity_ok = false;
    out.integrity_message = e.what();
  }
  return out;
}

SessionOutcome run_session(const BitVector& a, const BitVector& b,
                           const SessionConfig& config, RunOptions opts) {
  config.validate();
  SeededProvider provider(config);
  return run_session_with_provider(a, b, config, provider, opts);
}

}  // namespace bimpc

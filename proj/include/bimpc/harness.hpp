#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "bimpc/random.hpp"
#include "bimpc/session.hpp"

namespace bimpc {

/// Names one derived stream: session id, purpose, per-purpose index.
struct StreamLabel {
  std::string session;
  std::string purpose;
  std::uint64_t index = 0;

  std::string to_string() const;
};

/// One root seed plus a registry of issued labels. Re-deriving the same
/// label is idempotent; two distinct labels hashing to the same stream key
/// raise ConfigError instead of silently sharing a stream.
class RandomnessSource {
 public:
  explicit RandomnessSource(std::uint64_t root_seed) : root_(root_seed) {}

  SeededStream derive(const StreamLabel& label);

  std::uint64_t root() const { return root_; }

 private:
  std::uint64_t root_;
  std::map<std::uint64_t, std::string> issued_;
};

SeededStream derive_stream(RandomnessSource& source, const StreamLabel& label);

/// Serves session randomness from the five root seeds, one derived stream
/// per (purpose, index). Both holders of a shared purpose derive the same
/// label from the same root and therefore see the same value.
class SeededProvider final : public RandomnessProvider {
 public:
  explicit SeededProvider(const SessionConfig& config);

  std::uint32_t field_value(Rand purpose, std::size_t index) override;
  std::uint8_t bit_value(Rand purpose, std::size_t index) override;

 private:
  RandomnessSource& source_for(Rand purpose);

  std::string session_;
  std::uint32_t modulus_;
  RandomnessSource client1_private_;
  RandomnessSource client2_private_;
  RandomnessSource clients_shared_;
  RandomnessSource client1_master_;
  RandomnessSource client2_master_;
};

/// Counts distinct (purpose, index) draws without fixing their values; a
/// dry run with this provider prices an enumeration before it starts.
class CountingProvider final : public RandomnessProvider {
 public:
  explicit CountingProvider(std::uint32_t modulus) : modulus_(modulus) {}

  std::uint32_t field_value(Rand purpose, std::size_t index) override;
  std::uint8_t bit_value(Rand purpose, std::size_t index) override;

  std::uint64_t field_draws() const;
  std::uint64_t bit_draws() const;

  /// Draws in first-seen order; the audit assigns digits in this order.
  const std::vector<std::pair<Rand, std::size_t>>& schedule() const {
    return schedule_;
  }

 private:
  std::uint32_t record(Rand purpose, std::size_t index);

  std::uint32_t modulus_;
  std::map<std::pair<std::uint8_t, std::uint64_t>, bool> seen_;
  std::vector<std::pair<Rand, std::size_t>> schedule_;
};

// --- transcripts and views ---------------------------------------------------

struct TranscriptRecord {
  std::uint64_t index = 0;  // delivery order
  ProtocolMessage message;
};

struct Transcript {
  SessionConfig config;
  std::vector<TranscriptRecord> records;
  // Pre-shared randomness bytes per party, indexed by PartyId value.
  std::array<std::vector<std::uint8_t>, 3> preshared;
};

/// Full canonical serialization of the delivered messages, in order.
std::vector<std::uint8_t> transcript_bytes(const Transcript& t);

inline constexpr std::uint8_t kViewSeparator = 0xF0;

/// Appends one received message in view form: from, tag, OT index (4 bytes
/// little endian), payload length (4 bytes little endian), payload.
void append_view_record(std::vector<std::uint8_t>& out, PartyId from,
                        StepTag tag, std::uint32_t ot_index,
                        const std::vector<std::uint8_t>& payload);

/// Everything the party observes: its received messages in delivery order,
/// a separator, then the pre-shared channel randomness it holds. The party's
/// own inputs and private randomness are excluded; they are independent of
/// every other party's input, so the privacy checks quantify over them
/// separately.
std::vector<std::uint8_t> project_view(const Transcript& t, PartyId party);

/// Human-readable dump. The input length stays redacted unless debug is set;
/// only the padded total is public.
void dump_transcript(const Transcript& t, std::ostream& os,
                     bool debug = false);

std::string to_hex(const std::vector<std::uint8_t>& bytes);

// --- schedulers ---------------------------------------------------------------

enum class SchedulerKind {
  Canonical,        // one global FIFO queue
  SeedInterleaved,  // uniform choice among per-channel FIFO queues
  Threaded,         // three OS threads with per-party mailboxes
};

struct RunOptions {
  SchedulerKind scheduler = SchedulerKind::Canonical;
  std::uint64_t interleave_seed = 0;
};

/// Delivers until no messages remain. Per-channel FIFO order is preserved
/// under every scheduler. Throws HarnessError when messages address an
/// absent party or when the queue drains while parties still wait.
void deliver_until_quiescent(const std::vector<Party*>& parties,
                             std::vector<ProtocolMessage> initial,
                             Transcript& transcript,
                             SchedulerKind scheduler = SchedulerKind::Canonical,
                             std::uint64_t interleave_seed = 0);

struct SessionOutcome {
  std::uint64_t y = 0;
  bool integrity_ok = false;
  std::string integrity_message;
  MasterState master;  // white-box visibility for invariant tests
  Transcript transcript;
};

/// Runs one full session over the in-memory harness with seeded randomness.
SessionOutcome run_session(const BitVector& a, const BitVector& b,
                           const SessionConfig& config, RunOptions opts = {});

/// Same, with caller-owned randomness (assignment or counting providers).
SessionOutcome run_session_with_provider(const BitVector& a,
                                         const BitVector& b,
                                         const SessionConfig& config,
                                         RandomnessProvider& provider,
                                         RunOptions opts = {});

}  // namespace bimpc

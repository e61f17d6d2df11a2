#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bimpc/errors.hpp"
#include "bimpc/harness.hpp"

using namespace bimpc;

namespace {

SessionConfig make_config(std::size_t n, std::size_t pad, std::uint32_t q,
                          std::uint64_t seed, std::string id = "t") {
  SessionConfig config;
  config.input_length = n;
  config.pad_length = pad;
  config.modulus = q;
  config.seeds = SeedSet::derive(seed);
  config.session_id = std::move(id);
  return config;
}

// Projection of a transcript onto one directed channel, keeping order.
std::vector<ProtocolMessage> channel(const Transcript& t, PartyId from,
                                     PartyId to) {
  std::vector<ProtocolMessage> out;
  for (const auto& r : t.records) {
    if (r.message.from == from && r.message.to == to) out.push_back(r.message);
  }
  return out;
}

}  // namespace

TEST_CASE("stream labels and derivation") {
  StreamLabel label{"sess", "purpose", 3};
  CHECK(label.to_string() == "sess/purpose/3");

  RandomnessSource source(99);
  SeededStream s1 = source.derive(label);
  SeededStream s2 = source.derive(label);  // idempotent re-derivation
  CHECK(s1.draw_block(64) == s2.draw_block(64));
  SeededStream other = source.derive({"sess", "purpose", 4});
  CHECK(other.draw_block(64) != s1.draw_block(64));
  RandomnessSource root2(100);
  SeededStream different_root = root2.derive(label);
  SeededStream replay = RandomnessSource(99).derive(label);
  CHECK(different_root.draw_block(64) != replay.draw_block(64));
}

TEST_CASE("shared purposes agree across two providers of the same session") {
  SessionConfig config = make_config(2, 1, 7, 4);
  SeededProvider p1(config);
  SeededProvider p2(config);
  // Shared draws must match between the parties' own provider instances.
  CHECK(p1.field_value(Rand::PadShared, 0) == p2.field_value(Rand::PadShared, 0));
  CHECK(p1.field_value(Rand::KeyBlind, 0) == p2.field_value(Rand::KeyBlind, 0));
  CHECK(p1.field_value(Rand::OtPad0, 2) == p2.field_value(Rand::OtPad0, 2));
  CHECK(p1.bit_value(Rand::OtChoiceMask, 1) ==
        p2.bit_value(Rand::OtChoiceMask, 1));
  // Different sessions decorrelate.
  SessionConfig other = make_config(2, 1, 7, 4, "u");
  SeededProvider p3(other);
  bool any_differs = false;
  for (std::size_t i = 0; i < 3; ++i) {
    any_differs |= p3.field_value(Rand::OtPad0, i) !=
                   p1.field_value(Rand::OtPad0, i);
  }
  CHECK(any_differs);
}

TEST_CASE("counting provider prices draws without valuing them") {
  CountingProvider counter(7);
  CHECK(counter.field_value(Rand::MaskShare1, 0) == 0);
  CHECK(counter.field_value(Rand::MaskShare1, 0) == 0);  // dedup
  CHECK(counter.field_value(Rand::MaskShare1, 1) == 0);
  CHECK(counter.bit_value(Rand::XorMask, 0) == 0);
  CHECK(counter.field_draws() == 2);
  CHECK(counter.bit_draws() == 1);
  REQUIRE(counter.schedule().size() == 3);
  CHECK(counter.schedule()[0] == std::pair{Rand::MaskShare1, std::size_t{0}});
  CHECK(counter.schedule()[2] == std::pair{Rand::XorMask, std::size_t{0}});
}

TEST_CASE("canonical run delivers the documented order") {
  SessionConfig config = make_config(2, 0, 5, 21);
  SessionOutcome out = run_session(BitVector{1, 1}, BitVector{1, 0}, config);
  REQUIRE(out.integrity_ok);
  CHECK(out.y == 1);

  const auto& r = out.transcript.records;
  REQUIRE(r.size() == 12);
  std::vector<StepTag> tags;
  for (const auto& rec : r) tags.push_back(rec.message.tag);
  CHECK(tags == std::vector<StepTag>{
                    StepTag::AdditiveShare, StepTag::AdditiveShare,
                    StepTag::XorMaskedInput, StepTag::OtMaskedChoice,
                    StepTag::OtMaskedChoice, StepTag::OtMaskedLabels,
                    StepTag::OtMaskedLabels, StepTag::KeySum,
                    StepTag::OtDelivery, StepTag::OtDelivery,
                    StepTag::PadVector, StepTag::KeySum});
  for (std::size_t i = 0; i < r.size(); ++i) CHECK(r[i].index == i);

  // Master's receive order: share1, share2, keysum2, deliveries, pad marker,
  // keysum1.
  std::vector<std::pair<StepTag, PartyId>> to_master;
  for (const auto& rec : r) {
    if (rec.message.to == PartyId::Master) {
      to_master.emplace_back(rec.message.tag, rec.message.from);
    }
  }
  REQUIRE(to_master.size() == 7);
  CHECK(to_master[0] == std::pair{StepTag::AdditiveShare, PartyId::Client1});
  CHECK(to_master[1] == std::pair{StepTag::AdditiveShare, PartyId::Client2});
  CHECK(to_master[2] == std::pair{StepTag::KeySum, PartyId::Client2});
  CHECK(to_master[3].first == StepTag::OtDelivery);
  CHECK(to_master[4].first == StepTag::OtDelivery);
  CHECK(to_master[5] == std::pair{StepTag::PadVector, PartyId::Client1});
  CHECK(to_master[6] == std::pair{StepTag::KeySum, PartyId::Client1});
}

TEST_CASE("identical configurations replay byte-identically") {
  SessionConfig config = make_config(3, 2, 11, 77, "replay");
  SessionOutcome a = run_session(BitVector{1, 0, 1}, BitVector{1, 1, 0}, config);
  SessionOutcome b = run_session(BitVector{1, 0, 1}, BitVector{1, 1, 0}, config);
  CHECK(a.y == b.y);
  CHECK(transcript_bytes(a.transcript) == transcript_bytes(b.transcript));
  CHECK(project_view(a.transcript, PartyId::Master) ==
        project_view(b.transcript, PartyId::Master));

  std::ostringstream da, db;
  dump_transcript(a.transcript, da);
  dump_transcript(b.transcript, db);
  CHECK(da.str() == db.str());

  SessionConfig shifted = config;
  shifted.session_id = "other";
  SessionOutcome c =
      run_session(BitVector{1, 0, 1}, BitVector{1, 1, 0}, shifted);
  CHECK(c.y == a.y);
  CHECK(transcript_bytes(c.transcript) != transcript_bytes(a.transcript));

  SessionConfig reseeded = config;
  reseeded.seeds = SeedSet::derive(78);
  SessionOutcome d =
      run_session(BitVector{1, 0, 1}, BitVector{1, 1, 0}, reseeded);
  CHECK(d.y == a.y);
  CHECK(transcript_bytes(d.transcript) != transcript_bytes(a.transcript));
}

TEST_CASE("transcript bytes are the concatenated message encodings") {
  SessionConfig config = make_config(1, 1, 5, 13);
  SessionOutcome out = run_session(BitVector{1}, BitVector{0}, config);
  std::vector<std::uint8_t> rebuilt;
  for (const auto& rec : out.transcript.records) {
    auto piece = encode_message(rec.message);
    rebuilt.insert(rebuilt.end(), piece.begin(), piece.end());
  }
  CHECK(transcript_bytes(out.transcript) == rebuilt);
}

TEST_CASE("views are received records plus the pre-shared tail") {
  SessionConfig config = make_config(2, 1, 7, 31);
  SessionOutcome out = run_session(BitVector{0, 1}, BitVector{1, 1}, config);

  for (PartyId party :
       {PartyId::Master, PartyId::Client1, PartyId::Client2}) {
    std::vector<std::uint8_t> expected;
    for (const auto& rec : out.transcript.records) {
      if (rec.message.to != party) continue;
      append_view_record(expected, rec.message.from, rec.message.tag,
                         rec.message.ot_index, rec.message.payload);
    }
    expected.push_back(kViewSeparator);
    const auto& tail =
        out.transcript.preshared[static_cast<std::size_t>(party)];
    expected.insert(expected.end(), tail.begin(), tail.end());
    CHECK(project_view(out.transcript, party) == expected);
  }

  // The master's pre-shared tail is exactly both transfer pads then the
  // choice-mask bits, as served by the seeded provider.
  SeededProvider provider(config);
  std::vector<std::uint8_t> tail;
  FieldVector pad0(3, 7), pad1(3, 7);
  for (std::size_t i = 0; i < 3; ++i) {
    pad0.set(i, provider.field_value(Rand::OtPad0, i));
    pad1.set(i, provider.field_value(Rand::OtPad1, i));
  }
  auto enc0 = encode_elements(pad0);
  auto enc1 = encode_elements(pad1);
  tail.insert(tail.end(), enc0.begin(), enc0.end());
  tail.insert(tail.end(), enc1.begin(), enc1.end());
  for (std::size_t i = 0; i < 3; ++i) {
    tail.push_back(provider.bit_value(Rand::OtChoiceMask, i));
  }
  CHECK(out.transcript.preshared[0] == tail);
}

TEST_CASE("dump redacts the input length unless asked") {
  SessionConfig config = make_config(1, 2, 7, 3, "dumped");
  SessionOutcome out = run_session(BitVector{1}, BitVector{1}, config);
  std::ostringstream plain;
  dump_transcript(out.transcript, plain);
  const std::string text = plain.str();
  CHECK(text.find("bimpc transcript") == 0);
  CHECK(text.find("session: dumped") != std::string::npos);
  CHECK(text.find("modulus: 7") != std::string::npos);
  CHECK(text.find("entries: 3") != std::string::npos);
  CHECK(text.find("input") == std::string::npos);
  CHECK(text.find("variant") == std::string::npos);

  std::ostringstream verbose;
  dump_transcript(out.transcript, verbose, true);
  CHECK(verbose.str().find("input-length: 1") != std::string::npos);
  CHECK(verbose.str().find("variant: faithful") != std::string::npos);
}

TEST_CASE("every scheduler preserves per-channel order and the result") {
  SessionConfig config = make_config(3, 1, 11, 5);
  const BitVector a{1, 1, 0}, b{1, 0, 1};
  SessionOutcome canonical = run_session(a, b, config);
  REQUIRE(canonical.integrity_ok);
  REQUIRE(canonical.y == 1);

  const PartyId ids[] = {PartyId::Master, PartyId::Client1, PartyId::Client2};
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    RunOptions opts;
    opts.scheduler = SchedulerKind::SeedInterleaved;
    opts.interleave_seed = seed;
    SessionOutcome shuffled = run_session(a, b, config, opts);
    REQUIRE(shuffled.integrity_ok);
    CHECK(shuffled.y == canonical.y);
    CHECK(shuffled.transcript.records.size() ==
          canonical.transcript.records.size());
    for (PartyId from : ids) {
      for (PartyId to : ids) {
        CHECK(channel(shuffled.transcript, from, to) ==
              channel(canonical.transcript, from, to));
      }
    }
  }

  RunOptions threaded;
  threaded.scheduler = SchedulerKind::Threaded;
  for (int round = 0; round < 5; ++round) {
    SessionOutcome out = run_session(a, b, config, threaded);
    REQUIRE(out.integrity_ok);
    CHECK(out.y == canonical.y);
    for (PartyId from : ids) {
      for (PartyId to : ids) {
        CHECK(channel(out.transcript, from, to) ==
              channel(canonical.transcript, from, to));
      }
    }
  }
}

TEST_CASE("interleaved schedules really differ from the canonical one") {
  SessionConfig config = make_config(4, 2, 11, 9);
  SessionOutcome canonical =
      run_session(BitVector{1, 0, 1, 0}, BitVector{1, 1, 1, 1}, config);
  bool reordered = false;
  for (std::uint64_t seed = 1; seed <= 10 && !reordered; ++seed) {
    RunOptions opts;
    opts.scheduler = SchedulerKind::SeedInterleaved;
    opts.interleave_seed = seed;
    SessionOutcome out =
        run_session(BitVector{1, 0, 1, 0}, BitVector{1, 1, 1, 1}, config, opts);
    reordered = transcript_bytes(out.transcript) !=
                transcript_bytes(canonical.transcript);
  }
  CHECK(reordered);
}

TEST_CASE("the harness reports stalls and absent parties") {
  SessionConfig config = make_config(1, 0, 3, 2);
  SeededProvider provider(config);

  {
    Client1Party c1(BitVector{1}, config, provider);
    Client2Party c2(BitVector{1}, config, provider);
    MasterParty master(config, provider);
    std::vector<Party*> parties{&master, &c1, &c2};
    Transcript t;
    t.config = config;
    // Dropping the opening messages stalls everyone.
    CHECK_THROWS_AS(deliver_until_quiescent(parties, {}, t), HarnessError);
  }

  {
    SeededProvider fresh(config);
    Client1Party c1(BitVector{1}, config, fresh);
    Client2Party c2(BitVector{1}, config, fresh);
    std::vector<Party*> no_master{&c1, &c2};
    Transcript t;
    t.config = config;
    std::vector<ProtocolMessage> initial = c1.start();
    for (auto& m : c2.start()) initial.push_back(m);
    CHECK_THROWS_AS(deliver_until_quiescent(no_master, initial, t),
                    HarnessError);
  }
}

TEST_CASE("stall descriptions name the waiting parties") {
  SessionConfig config = make_config(1, 0, 3, 2);
  SeededProvider provider(config);
  MasterParty master(config, provider);
  CHECK(master.pending_description().find("share1") != std::string::npos);
  Client1Party c1(BitVector{1}, config, provider);
  CHECK(c1.pending_description().find("masked input") != std::string::npos);
  Client2Party c2(BitVector{1}, config, provider);
  CHECK(c2.pending_description().find("slot 0") != std::string::npos);
}

TEST_CASE("run_session validates its inputs") {
  SessionConfig config = make_config(2, 0, 5, 1);
  CHECK_THROWS_AS(run_session(BitVector{1}, BitVector{1, 0}, config),
                  InputError);
  CHECK_THROWS_AS(
      run_session(BitVector{1, 0}, BitVector{1, 0, 1}, config), InputError);
  SessionConfig bad = config;
  bad.modulus = 4;
  CHECK_THROWS_AS(run_session(BitVector{1, 0}, BitVector{1, 0}, bad),
                  ConfigError);
}

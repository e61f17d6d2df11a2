#include "bimpc/audit.hpp"

#include <algorithm>
#include <exception>
#include <ostream>
#include <thread>
#include <tuple>
#include <utility>

#include "bimpc/errors.hpp"
#include "bimpc/prg.hpp"

namespace bimpc {

namespace {

inline std::uint32_t addq(std::uint32_t x, std::uint32_t y, std::uint32_t q) {
  const std::uint32_t s = x + y;
  return s >= q ? s - q : s;
}

inline std::uint32_t subq(std::uint32_t x, std::uint32_t y, std::uint32_t q) {
  return x >= y ? x - y : x + q - y;
}

std::string describe(const SessionConfig& c) {
  std::string out = "n=" + std::to_string(c.input_length) +
                    " pad=" + std::to_string(c.pad_length) +
                    " q=" + std::to_string(c.modulus);
  if (c.variant != Variant::Faithful) {
    out += " variant=" + std::string(variant_name(c.variant));
  }
  return out;
}

BitVector bits_of(std::uint64_t value, std::size_t n) {
  BitVector out = BitVector::zeros(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.set(i, static_cast<std::uint8_t>((value >> i) & 1));
  }
  return out;
}

std::string pair_label(const BitVector& a, const BitVector& b) {
  return "a=" + a.to_string() + " b=" + b.to_string();
}

std::string clip(std::string text, std::size_t limit = 200) {
  if (text.size() > limit) {
    text.resize(limit);
    text += "...";
  }
  return text;
}

void ensure_under_cap(const CostBreakdown& cost, std::uint64_t cap) {
  if (!cost.overflow && cost.total <= cap) return;
  const std::string amount =
      cost.overflow ? "more than 2^64" : std::to_string(cost.total);
  throw CapacityError("enumeration needs " + amount +
                          " assignments, over the cap " + std::to_string(cap),
                      cost.overflow ? UINT64_MAX : cost.total);
}

/// Runs the sink over every assignment of the digits that are not fixed by
/// the conditioning cell: the masks, chaff, label masks, shared pads, the
/// blind, and the xor-mask bits. The sink receives the master's message
/// coordinates in canonical view order: share1, share2, key sum 2, the
/// deliveries, key sum 1 (the pad marker carries no payload).
template <typename Sink>
void for_each_inner(const BitVector& a, const BitVector& b,
                    const SessionConfig& cfg, const std::uint32_t* alpha0,
                    const std::uint32_t* alpha1, const std::uint8_t* km,
                    Sink&& sink) {
  const std::uint32_t q = cfg.modulus;
  const std::size_t n = cfg.input_length;
  const std::size_t np = cfg.pad_length;
  const std::size_t fields = 3 * n + 3 * np + 1;
  const std::size_t total_digits = fields + n;

  std::vector<std::uint32_t> digits(total_digits, 0);
  std::vector<std::uint32_t> coords(3 * (n + np) + 2, 0);
  std::vector<std::uint32_t> av(n), bv(n);
  for (std::size_t i = 0; i < n; ++i) {
    av[i] = a.at(i);
    bv[i] = b.at(i);
  }

  std::uint32_t* const k1s = digits.data();
  std::uint32_t* const p1s = k1s + n;
  std::uint32_t* const k2s = p1s + np;
  std::uint32_t* const p2s = k2s + n;
  std::uint32_t* const lbl = p2s + np;  // label mask k
  std::uint32_t* const pms = lbl + n;   // shared pads
  std::uint32_t* const rr = pms + np;   // key-sum blind, one digit
  std::uint32_t* const k2m = rr + 1;    // xor-mask bits

  for (;;) {
    std::uint32_t* c = coords.data();
    for (std::size_t s = 0; s < n; ++s) *c++ = addq(av[s], k1s[s], q);
    for (std::size_t j = 0; j < np; ++j) *c++ = p1s[j];
    for (std::size_t s = 0; s < n; ++s) *c++ = addq(bv[s], k2s[s], q);
    for (std::size_t j = 0; j < np; ++j) *c++ = p2s[j];

    std::uint32_t ks2 = 0;
    for (std::size_t s = 0; s < n; ++s) {
      ks2 = addq(ks2, subq(k2s[s], lbl[s], q), q);
    }
    for (std::size_t j = 0; j < np; ++j) ks2 = addq(ks2, p2s[j], q);
    *c++ = subq(ks2, rr[0], q);

    for (std::size_t s = 0; s < n; ++s) {
      const std::uint32_t m = av[s] ^ bv[s] ^ k2m[s];
      const std::uint32_t beta =
          m != 0 ? addq(1 - k2m[s], lbl[s], q) : addq(k2m[s], lbl[s], q);
      *c++ = addq(beta, km[s] != 0 ? alpha1[s] : alpha0[s], q);
    }
    for (std::size_t j = 0; j < np; ++j) {
      const std::size_t s = n + j;
      *c++ = addq(pms[j], km[s] != 0 ? alpha1[s] : alpha0[s], q);
    }

    std::uint32_t ks1 = 0;
    for (std::size_t s = 0; s < n; ++s) ks1 = addq(ks1, k1s[s], q);
    for (std::size_t j = 0; j < np; ++j) {
      ks1 = addq(ks1, subq(p1s[j], pms[j], q), q);
    }
    *c++ = addq(ks1, rr[0], q);

    sink(coords.data());

    std::size_t pos = total_digits - 1;
    for (;;) {
      const std::uint32_t radix = pos < fields ? q : 2;
      if (++digits[pos] < radix) break;
      digits[pos] = 0;
      if (pos == 0) return;
      --pos;
    }
  }
}

/// Number of assignments one inner sweep covers.
std::uint64_t inner_total(const SessionConfig& cfg) {
  unsigned __int128 total = 1;
  const std::size_t fields =
      3 * cfg.input_length + 3 * cfg.pad_length + 1;
  for (std::size_t i = 0; i < fields; ++i) total *= cfg.modulus;
  for (std::size_t i = 0; i < cfg.input_length; ++i) total *= 2;
  if (total > UINT64_MAX) {
    throw CapacityError("conditioned enumeration does not fit 64 bits",
                        UINT64_MAX);
  }
  return static_cast<std::uint64_t>(total);
}

struct CellOdometer {
  std::vector<std::uint32_t> alpha0;
  std::vector<std::uint32_t> alpha1;
  std::vector<std::uint8_t> km;
  std::uint32_t q;

  explicit CellOdometer(std::size_t slots, std::uint32_t modulus)
      : alpha0(slots, 0), alpha1(slots, 0), km(slots, 0), q(modulus) {}

  bool advance() {
    for (std::size_t i = km.size(); i-- > 0;) {
      if (++km[i] < 2) return true;
      km[i] = 0;
    }
    for (std::size_t i = alpha1.size(); i-- > 0;) {
      if (++alpha1[i] < q) return true;
      alpha1[i] = 0;
    }
    for (std::size_t i = alpha0.size(); i-- > 0;) {
      if (++alpha0[i] < q) return true;
      alpha0[i] = 0;
    }
    return false;
  }

  std::string to_string() const {
    auto join = [](const auto& v) {
      std::string out;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i != 0) out += ",";
        out += std::to_string(static_cast<unsigned>(v[i]));
      }
      return out;
    };
    return "alpha0=(" + join(alpha0) + ") alpha1=(" + join(alpha1) +
           ") km=(" + join(km) + ")";
  }
};

}  // namespace

CostBreakdown enumeration_cost(const SessionConfig& config) {
  config.validate();
  const auto schedule = draw_schedule(config);
  CostBreakdown out;
  unsigned __int128 total = 1;
  for (const auto& entry : schedule) {
    if (rand_is_bit(entry.first)) {
      ++out.bit_draws;
      total *= 2;
    } else {
      ++out.field_draws;
      total *= config.modulus;
    }
    if (total > UINT64_MAX) {
      out.overflow = true;
      return out;
    }
  }
  out.total = static_cast<std::uint64_t>(total);
  return out;
}

std::vector<std::pair<Rand, std::size_t>> draw_schedule(
    const SessionConfig& config) {
  config.validate();
  CountingProvider counter(config.modulus);
  const BitVector zero = BitVector::zeros(config.input_length);
  // Every draw happens at construction; no messages need to flow.
  Client1Party client1(zero, config, counter);
  Client2Party client2(zero, config, counter);
  MasterParty master(config, counter);
  return counter.schedule();
}

AssignmentProvider::AssignmentProvider(const SessionConfig& config)
    : modulus_(config.modulus), schedule_(draw_schedule(config)) {
  for (std::size_t i = 0; i < schedule_.size(); ++i) {
    position_.emplace(
        std::make_pair(static_cast<std::uint8_t>(schedule_[i].first),
                       static_cast<std::uint64_t>(schedule_[i].second)),
        i);
  }
  digits_.assign(schedule_.size(), 0);
}

std::uint32_t AssignmentProvider::lookup(Rand purpose,
                                         std::size_t index) const {
  const auto it = position_.find(
      std::make_pair(static_cast<std::uint8_t>(purpose),
                     static_cast<std::uint64_t>(index)));
  if (it == position_.end()) {
    throw ConfigError("randomness draw outside the recorded schedule");
  }
  return digits_[it->second];
}

std::uint32_t AssignmentProvider::field_value(Rand purpose,
                                              std::size_t index) {
  if (rand_is_bit(purpose)) {
    throw ConfigError("field draw requested from a bit-valued purpose");
  }
  return lookup(purpose, index);
}

std::uint8_t AssignmentProvider::bit_value(Rand purpose, std::size_t index) {
  if (!rand_is_bit(purpose)) {
    throw ConfigError("bit draw requested from a field-valued purpose");
  }
  return static_cast<std::uint8_t>(lookup(purpose, index));
}

std::uint32_t AssignmentProvider::radix(std::size_t pos) const {
  if (pos >= schedule_.size()) throw InputError("digit position out of range");
  return rand_is_bit(schedule_[pos].first) ? 2 : modulus_;
}

void AssignmentProvider::set_digit(std::size_t pos, std::uint32_t value) {
  if (value >= radix(pos)) throw InputError("digit exceeds its radix");
  digits_[pos] = value;
}

void AssignmentProvider::seek(std::uint64_t assignment_index) {
  for (std::size_t pos = digits_.size(); pos-- > 0;) {
    const std::uint32_t r = radix(pos);
    digits_[pos] = static_cast<std::uint32_t>(assignment_index % r);
    assignment_index /= r;
  }
  if (assignment_index != 0) {
    throw InputError("assignment index out of range");
  }
}

bool AssignmentProvider::advance() {
  for (std::size_t pos = digits_.size(); pos-- > 0;) {
    if (++digits_[pos] < radix(pos)) return true;
    digits_[pos] = 0;
  }
  return false;
}

void ViewDistribution::add(std::vector<std::uint8_t> view) {
  ++counts_[std::move(view)];
  ++total_;
}

bool ViewDistribution::same_distribution(const ViewDistribution& o) const {
  if (total_ == 0 || o.total_ == 0) return total_ == o.total_;
  auto ia = counts_.begin();
  auto ib = o.counts_.begin();
  while (ia != counts_.end() || ib != o.counts_.end()) {
    if (ia == counts_.end() || ib == o.counts_.end()) return false;
    if (ia->first != ib->first) return false;
    const unsigned __int128 lhs =
        static_cast<unsigned __int128>(ia->second) * o.total_;
    const unsigned __int128 rhs =
        static_cast<unsigned __int128>(ib->second) * total_;
    if (lhs != rhs) return false;
    ++ia;
    ++ib;
  }
  return true;
}

std::string ViewDistribution::first_difference(
    const ViewDistribution& o) const {
  auto ia = counts_.begin();
  auto ib = o.counts_.begin();
  auto entry = [&](const std::vector<std::uint8_t>& view, std::uint64_t ca,
                   std::uint64_t cb) {
    std::vector<std::uint8_t> prefix(
        view.begin(), view.begin() + std::min<std::size_t>(view.size(), 48));
    return "view " + to_hex(prefix) + (view.size() > 48 ? "..." : "") +
           " counts " + std::to_string(ca) + "/" + std::to_string(total_) +
           " against " + std::to_string(cb) + "/" + std::to_string(o.total_);
  };
  while (ia != counts_.end() || ib != o.counts_.end()) {
    if (ib == o.counts_.end() || (ia != counts_.end() && ia->first < ib->first)) {
      return entry(ia->first, ia->second, 0);
    }
    if (ia == counts_.end() || ib->first < ia->first) {
      return entry(ib->first, 0, ib->second);
    }
    const unsigned __int128 lhs =
        static_cast<unsigned __int128>(ia->second) * o.total_;
    const unsigned __int128 rhs =
        static_cast<unsigned __int128>(ib->second) * total_;
    if (lhs != rhs) return entry(ia->first, ia->second, ib->second);
    ++ia;
    ++ib;
  }
  return "";
}

void ViewDistribution::merge_from(const ViewDistribution& o) {
  for (const auto& [view, count] : o.counts_) counts_[view] += count;
  total_ += o.total_;
}

EnumeratedViews enumerate_views(const BitVector& a, const BitVector& b,
                                const SessionConfig& config,
                                std::uint64_t cap, unsigned jobs) {
  config.validate();
  const CostBreakdown cost = enumeration_cost(config);
  ensure_under_cap(cost, cap);
  if (jobs == 0) throw ConfigError("jobs must be at least 1");

  // The broken key sum is the one variant that reconstructs garbage.
  const bool check_result =
      config.variant != Variant::KeySumMissingLabelMask;
  const std::uint64_t expected = brute_force_dot(a, b);

  auto sweep = [&](std::uint64_t begin, std::uint64_t count,
                   EnumeratedViews& local) {
    AssignmentProvider provider(config);
    provider.seek(begin);
    for (std::uint64_t i = 0; i < count; ++i) {
      SessionOutcome out = run_session_with_provider(a, b, config, provider);
      if (check_result && (!out.integrity_ok || out.y != expected)) {
        throw ProtocolError(
            "assignment " + std::to_string(begin + i) + " reconstructed " +
            (out.integrity_ok ? std::to_string(out.y)
                              : std::string("an integrity failure")) +
            " instead of " + std::to_string(expected) + " for " +
            pair_label(a, b));
      }
      local.master.add(project_view(out.transcript, PartyId::Master));
      local.client1.add(project_view(out.transcript, PartyId::Client1));
      local.client2.add(project_view(out.transcript, PartyId::Client2));
      ++local.assignments;
      provider.advance();
    }
  };

  if (jobs == 1) {
    EnumeratedViews views;
    sweep(0, cost.total, views);
    return views;
  }

  const std::uint64_t workers = std::min<std::uint64_t>(jobs, cost.total);
  std::vector<EnumeratedViews> locals(workers);
  std::vector<std::exception_ptr> failures(workers);
  std::vector<std::thread> threads;
  const std::uint64_t base = cost.total / workers;
  const std::uint64_t rem = cost.total % workers;
  std::uint64_t begin = 0;
  for (std::uint64_t w = 0; w < workers; ++w) {
    const std::uint64_t count = base + (w < rem ? 1 : 0);
    threads.emplace_back([&, w, begin, count] {
      try {
        sweep(begin, count, locals[w]);
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
    begin += count;
  }
  for (auto& t : threads) t.join();
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
  EnumeratedViews views;
  for (const auto& local : locals) {
    views.master.merge_from(local.master);
    views.client1.merge_from(local.client1);
    views.client2.merge_from(local.client2);
    views.assignments += local.assignments;
  }
  return views;
}

CheckReport check_master_privacy(const SessionConfig& config,
                                 std::uint64_t cap, unsigned jobs) {
  CheckReport report;
  report.name = "master-privacy " + describe(config);
  const std::size_t n = config.input_length;
  ensure_under_cap(enumeration_cost(config), cap);

  std::map<std::uint64_t, std::pair<ViewDistribution, std::string>> reference;
  std::uint64_t pairs = 0;
  for (std::uint64_t abits = 0; abits < (std::uint64_t{1} << n); ++abits) {
    for (std::uint64_t bbits = 0; bbits < (std::uint64_t{1} << n); ++bbits) {
      const BitVector a = bits_of(abits, n);
      const BitVector b = bits_of(bbits, n);
      EnumeratedViews views = enumerate_views(a, b, config, cap, jobs);
      report.work += views.assignments;
      ++pairs;
      const std::uint64_t y = brute_force_dot(a, b);
      auto it = reference.find(y);
      if (it == reference.end()) {
        reference.emplace(y, std::make_pair(std::move(views.master),
                                            pair_label(a, b)));
        continue;
      }
      if (!it->second.first.same_distribution(views.master)) {
        report.passed = false;
        report.detail =
            "master views differ inside the y=" + std::to_string(y) +
            " class: " + pair_label(a, b) + " against " + it->second.second +
            "; " + it->second.first.first_difference(views.master);
        return report;
      }
    }
  }
  report.passed = true;
  report.detail = "master views identical within each result class across " +
                  std::to_string(pairs) + " input pairs";
  return report;
}

CheckReport check_client_privacy(const SessionConfig& config,
                                 std::uint64_t cap, unsigned jobs) {
  CheckReport report;
  report.name = "client-privacy " + describe(config);
  const std::size_t n = config.input_length;
  ensure_under_cap(enumeration_cost(config), cap);

  bool have_reference = false;
  ViewDistribution ref1;
  ViewDistribution ref2;
  std::string ref_label;
  std::uint64_t pairs = 0;
  for (std::uint64_t abits = 0; abits < (std::uint64_t{1} << n); ++abits) {
    for (std::uint64_t bbits = 0; bbits < (std::uint64_t{1} << n); ++bbits) {
      const BitVector a = bits_of(abits, n);
      const BitVector b = bits_of(bbits, n);
      EnumeratedViews views = enumerate_views(a, b, config, cap, jobs);
      report.work += views.assignments;
      ++pairs;
      if (!have_reference) {
        have_reference = true;
        ref1 = std::move(views.client1);
        ref2 = std::move(views.client2);
        ref_label = pair_label(a, b);
        continue;
      }
      if (!ref1.same_distribution(views.client1)) {
        report.passed = false;
        report.detail = "client 1 views depend on the inputs: " +
                        pair_label(a, b) + " against " + ref_label + "; " +
                        ref1.first_difference(views.client1);
        return report;
      }
      if (!ref2.same_distribution(views.client2)) {
        report.passed = false;
        report.detail = "client 2 views depend on the inputs: " +
                        pair_label(a, b) + " against " + ref_label + "; " +
                        ref2.first_difference(views.client2);
        return report;
      }
    }
  }
  report.passed = true;
  report.detail = "client views identical across " + std::to_string(pairs) +
                  " input pairs";
  return report;
}

std::vector<CheckReport> check_sabotage_detection(const SessionConfig& config,
                                                  std::uint64_t cap,
                                                  unsigned jobs) {
  std::vector<CheckReport> out;

  // Padding does not influence either leak, so the cheap pad-free
  // configuration keeps the sabotage sweeps fast.
  SessionConfig keysum = config;
  keysum.pad_length = 0;
  keysum.variant = Variant::KeySumMissingLabelMask;
  CheckReport inner = check_master_privacy(keysum, cap, jobs);
  CheckReport r1;
  r1.name = "sabotage " + std::string(variant_name(keysum.variant)) +
            " caught by master-privacy";
  r1.work = inner.work;
  r1.passed = !inner.passed;
  r1.detail = r1.passed
                  ? clip("rejected as required: " + inner.detail)
                  : "master privacy failed to notice the missing label mask";
  out.push_back(std::move(r1));

  SessionConfig noxor = config;
  noxor.pad_length = 0;
  noxor.variant = Variant::NoXorMask;
  inner = check_client_privacy(noxor, cap, jobs);
  CheckReport r2;
  r2.name = "sabotage " + std::string(variant_name(noxor.variant)) +
            " caught by client-privacy";
  r2.work = inner.work;
  r2.passed = !inner.passed;
  r2.detail = r2.passed
                  ? clip("rejected as required: " + inner.detail)
                  : "client privacy failed to notice the unmasked input";
  out.push_back(std::move(r2));

  // The raw pad needs at least one pad entry to differ from the faithful run.
  SessionConfig faithful = config;
  faithful.pad_length = std::max<std::size_t>(std::size_t{1}, config.pad_length);
  faithful.variant = Variant::Faithful;
  SessionConfig raw = faithful;
  raw.variant = Variant::RawPad;
  const StructuralComparison cmp = compare_structure(faithful, raw);
  CheckReport r3;
  r3.name = "sabotage " + std::string(variant_name(raw.variant)) +
            " caught by structural comparison";
  r3.work = 2;
  r3.passed = !cmp.equal;
  r3.detail = r3.passed
                  ? clip("rejected as required: " + cmp.detail)
                  : "structural comparison failed to notice the raw pad";
  out.push_back(std::move(r3));
  return out;
}

StructuralComparison compare_structure(const SessionConfig& config_a,
                                       const SessionConfig& config_b) {
  using Skeleton =
      std::vector<std::tuple<StepTag, std::uint32_t, std::size_t>>;
  auto skeleton_of = [](const SessionConfig& base) {
    SessionConfig cfg = base;
    cfg.seeds = SeedSet::derive(0x5eedc0de5eedc0deULL);
    cfg.session_id = "structural";
    const BitVector zero = BitVector::zeros(cfg.input_length);
    const SessionOutcome out = run_session(zero, zero, cfg);
    Skeleton sk;
    for (const auto& record : out.transcript.records) {
      const ProtocolMessage& m = record.message;
      if (m.to != PartyId::Master) continue;
      sk.emplace_back(m.tag, m.ot_index, m.payload.size());
    }
    return sk;
  };

  const Skeleton sa = skeleton_of(config_a);
  const Skeleton sb = skeleton_of(config_b);
  StructuralComparison out;
  if (sa == sb) {
    out.equal = true;
    out.detail = "identical skeleton of " + std::to_string(sa.size()) +
                 " master-bound messages";
    return out;
  }
  out.equal = false;
  if (sa.size() != sb.size()) {
    out.detail = "master-bound message counts differ: " +
                 std::to_string(sa.size()) + " against " +
                 std::to_string(sb.size());
    return out;
  }
  for (std::size_t i = 0; i < sa.size(); ++i) {
    if (sa[i] == sb[i]) continue;
    out.detail =
        "message " + std::to_string(i) + " differs: tag " +
        std::string(tag_name(std::get<0>(sa[i]))) + " len " +
        std::to_string(std::get<2>(sa[i])) + " against tag " +
        std::string(tag_name(std::get<0>(sb[i]))) + " len " +
        std::to_string(std::get<2>(sb[i]));
    return out;
  }
  out.detail = "skeletons differ";
  return out;
}

BitVector representative_input(std::size_t n, std::size_t y) {
  if (y > n) throw InputError("result exceeds the input length");
  BitVector out = BitVector::zeros(n);
  for (std::size_t i = 0; i < y; ++i) out.set(i, 1);
  return out;
}

DistributionalComparison compare_master_distributions(
    const SessionConfig& config_a, const SessionConfig& config_b,
    std::size_t y, std::uint64_t cap) {
  config_a.validate();
  config_b.validate();
  if (config_a.variant != Variant::Faithful ||
      config_b.variant != Variant::Faithful) {
    throw ConfigError("the distributional comparison covers the faithful protocol");
  }
  if (config_a.modulus != config_b.modulus) {
    throw ConfigError("the distributional comparison needs one modulus");
  }
  DistributionalComparison out;
  if (config_a.total_length() != config_b.total_length()) {
    out.witness = "padded totals differ";
    return out;
  }
  const StructuralComparison structure =
      compare_structure(config_a, config_b);
  if (!structure.equal) {
    out.witness = "structural mismatch: " + structure.detail;
    return out;
  }
  ensure_under_cap(enumeration_cost(config_a), cap);
  ensure_under_cap(enumeration_cost(config_b), cap);

  const std::uint32_t q = config_a.modulus;
  const std::size_t slots = config_a.total_length();
  const std::size_t dims = 3 * slots + 2;
  unsigned __int128 table = 1;
  for (std::size_t i = 0; i < dims; ++i) {
    table *= q;
    if (table > (std::uint64_t{1} << 27)) {
      throw CapacityError("conditioned view table would not fit in memory",
                          UINT64_MAX);
    }
  }
  const std::size_t table_size = static_cast<std::size_t>(table);

  const BitVector rep_a = representative_input(config_a.input_length, y);
  const BitVector rep_b = representative_input(config_b.input_length, y);
  const std::uint64_t inner_a = inner_total(config_a);
  const std::uint64_t inner_b = inner_total(config_b);

  std::vector<std::uint32_t> counts_a(table_size, 0);
  std::vector<std::uint32_t> counts_b(table_size, 0);

  CellOdometer cell(slots, q);
  do {
    std::fill(counts_a.begin(), counts_a.end(), 0);
    std::fill(counts_b.begin(), counts_b.end(), 0);
    auto fold = [&](std::uint32_t* counts) {
      return [counts, q, dims](const std::uint32_t* coords) {
        std::uint64_t idx = 0;
        for (std::size_t i = 0; i < dims; ++i) idx = idx * q + coords[i];
        ++counts[idx];
      };
    };
    for_each_inner(rep_a, rep_a, config_a, cell.alpha0.data(),
                   cell.alpha1.data(), cell.km.data(), fold(counts_a.data()));
    for_each_inner(rep_b, rep_b, config_b, cell.alpha0.data(),
                   cell.alpha1.data(), cell.km.data(), fold(counts_b.data()));
    out.assignments_a += inner_a;
    out.assignments_b += inner_b;
    for (std::size_t idx = 0; idx < table_size; ++idx) {
      const std::uint64_t lhs = std::uint64_t{counts_a[idx]} * inner_b;
      const std::uint64_t rhs = std::uint64_t{counts_b[idx]} * inner_a;
      if (lhs == rhs) continue;
      std::string coords_text;
      std::uint64_t rest = idx;
      std::vector<std::uint32_t> decoded(dims, 0);
      for (std::size_t i = dims; i-- > 0;) {
        decoded[i] = static_cast<std::uint32_t>(rest % q);
        rest /= q;
      }
      for (std::size_t i = 0; i < dims; ++i) {
        if (i != 0) coords_text += ",";
        coords_text += std::to_string(decoded[i]);
      }
      out.witness = "y=" + std::to_string(y) + " cell " + cell.to_string() +
                    " coords (" + coords_text + ") counts " +
                    std::to_string(counts_a[idx]) + "/" +
                    std::to_string(inner_a) + " against " +
                    std::to_string(counts_b[idx]) + "/" +
                    std::to_string(inner_b);
      return out;
    }
  } while (cell.advance());

  out.equal = true;
  return out;
}

ViewDistribution master_distribution_flat(const BitVector& a,
                                          const BitVector& b,
                                          const SessionConfig& config,
                                          std::uint64_t cap) {
  config.validate();
  if (config.variant != Variant::Faithful) {
    throw ConfigError("the flat kernel covers the faithful protocol");
  }
  ensure_under_cap(enumeration_cost(config), cap);

  const std::uint32_t q = config.modulus;
  const std::size_t slots = config.total_length();
  const unsigned width = field_byte_width(q);

  auto put_field = [width](std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (unsigned k = 0; k < width; ++k) {
      out.push_back(static_cast<std::uint8_t>((v >> (8 * k)) & 0xFF));
    }
  };
  auto put_record = [&](std::vector<std::uint8_t>& view, PartyId from,
                        StepTag tag, std::uint32_t ot_index,
                        const std::uint32_t* values, std::size_t count) {
    std::vector<std::uint8_t> payload;
    payload.reserve(count * width);
    for (std::size_t i = 0; i < count; ++i) put_field(payload, values[i]);
    append_view_record(view, from, tag, ot_index, payload);
  };

  ViewDistribution dist;
  CellOdometer cell(slots, q);
  do {
    std::vector<std::uint8_t> preshared;
    for (std::uint32_t v : cell.alpha0) put_field(preshared, v);
    for (std::uint32_t v : cell.alpha1) put_field(preshared, v);
    preshared.insert(preshared.end(), cell.km.begin(), cell.km.end());

    for_each_inner(
        a, b, config, cell.alpha0.data(), cell.alpha1.data(), cell.km.data(),
        [&](const std::uint32_t* coords) {
          std::vector<std::uint8_t> view;
          const std::uint32_t* c = coords;
          put_record(view, PartyId::Client1, StepTag::AdditiveShare,
                     kNoOtIndex, c, slots);
          c += slots;
          put_record(view, PartyId::Client2, StepTag::AdditiveShare,
                     kNoOtIndex, c, slots);
          c += slots;
          put_record(view, PartyId::Client2, StepTag::KeySum, kNoOtIndex, c,
                     1);
          c += 1;
          for (std::size_t s = 0; s < slots; ++s) {
            put_record(view, PartyId::Client1, StepTag::OtDelivery,
                       static_cast<std::uint32_t>(s), c, 1);
            c += 1;
          }
          put_record(view, PartyId::Client1, StepTag::PadVector, kNoOtIndex,
                     nullptr, 0);
          put_record(view, PartyId::Client1, StepTag::KeySum, kNoOtIndex, c,
                     1);
          view.push_back(kViewSeparator);
          view.insert(view.end(), preshared.begin(), preshared.end());
          dist.add(std::move(view));
        });
  } while (cell.advance());
  return dist;
}

LengthHidingResult check_length_hiding(const SessionConfig& config_a,
                                       const SessionConfig& config_b,
                                       bool distributional,
                                       std::uint64_t cap) {
  LengthHidingResult out;
  out.structural = compare_structure(config_a, config_b);
  if (!out.structural.equal || !distributional) return out;

  const bool identical = config_a.input_length == config_b.input_length &&
                         config_a.pad_length == config_b.pad_length &&
                         config_a.modulus == config_b.modulus &&
                         config_a.variant == config_b.variant;
  if (identical) {
    out.distributional_detail =
        "identical configurations, distributions equal by definition";
    return out;
  }
  out.distributional_ran = true;
  const std::size_t shared =
      std::min(config_a.input_length, config_b.input_length);
  for (std::size_t y = 0; y <= shared; ++y) {
    const DistributionalComparison cmp =
        compare_master_distributions(config_a, config_b, y, cap);
    out.assignments += cmp.assignments_a + cmp.assignments_b;
    if (!cmp.equal) {
      out.distributional_equal = false;
      out.distributional_detail = cmp.witness;
      return out;
    }
  }
  out.distributional_detail =
      "master view distributions match for every shared result y <= " +
      std::to_string(shared);
  return out;
}

void write_audit_report(const std::vector<CheckReport>& checks,
                        std::ostream& os) {
  os << "bimpc privacy audit\n";
  os << "generator: " << kGeneratorName << "\n";
  os << "checks: " << checks.size() << "\n";
  bool all = true;
  for (const auto& check : checks) {
    os << (check.passed ? "[pass] " : "[FAIL] ") << check.name
       << " work=" << check.work << "\n";
    if (!check.detail.empty()) os << "       " << check.detail << "\n";
    all = all && check.passed;
  }
  os << "verdict: " << (all ? "pass" : "fail") << "\n";
}

}  // namespace bimpc

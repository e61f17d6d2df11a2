#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bimpc/doma.hpp"
#include "bimpc/harness.hpp"

namespace bimpc {

// The auditor proves privacy by exhaustion: it replaces every random draw of
// one session with an odometer digit, replays the real party pipeline for
// every assignment, and compares the resulting view distributions exactly.
// No sampling, no tolerances; failures come with a concrete witness.

struct CostBreakdown {
  std::uint64_t field_draws = 0;
  std::uint64_t bit_draws = 0;
  bool overflow = false;   // q^fields * 2^bits does not fit 64 bits
  std::uint64_t total = 0; // assignments to enumerate, when it fits
};

/// Prices an exhaustive enumeration by dry-running the parties against a
/// counting provider. Every draw happens at party construction, so the
/// schedule is complete before any message flows.
CostBreakdown enumeration_cost(const SessionConfig& config);

/// The draw schedule in first-seen order (client 1, then client 2, then the
/// master's rederivations, which deduplicate away).
std::vector<std::pair<Rand, std::size_t>> draw_schedule(
    const SessionConfig& config);

/// Mixed-radix odometer over one session's randomness: each (purpose, index)
/// the session draws is one digit, field digits in [0, q), bit digits in
/// {0, 1}. The last digit varies fastest.
class AssignmentProvider final : public RandomnessProvider {
 public:
  explicit AssignmentProvider(const SessionConfig& config);

  std::uint32_t field_value(Rand purpose, std::size_t index) override;
  std::uint8_t bit_value(Rand purpose, std::size_t index) override;

  std::size_t digit_count() const { return digits_.size(); }
  std::uint32_t radix(std::size_t pos) const;
  std::uint32_t digit(std::size_t pos) const { return digits_[pos]; }
  void set_digit(std::size_t pos, std::uint32_t value);
  const std::vector<std::pair<Rand, std::size_t>>& schedule() const {
    return schedule_;
  }

  /// Jumps to the assignment with this index.
  void seek(std::uint64_t assignment_index);

  /// Steps to the next assignment; false when wrapping back to all zeros.
  bool advance();

 private:
  std::uint32_t lookup(Rand purpose, std::size_t index) const;

  std::uint32_t modulus_ = 0;
  std::vector<std::pair<Rand, std::size_t>> schedule_;
  std::map<std::pair<std::uint8_t, std::uint64_t>, std::size_t> position_;
  std::vector<std::uint32_t> digits_;
};

/// Exact multiset of canonical view byte strings.
class ViewDistribution {
 public:
  void add(std::vector<std::uint8_t> view);

  std::uint64_t total() const { return total_; }
  std::size_t distinct() const { return counts_.size(); }
  const std::map<std::vector<std::uint8_t>, std::uint64_t>& counts() const {
    return counts_;
  }

  /// Exact equality as distributions: cross-multiplied counts, no floats.
  bool same_distribution(const ViewDistribution& o) const;

  /// Witness text for the first differing view; empty when equal.
  std::string first_difference(const ViewDistribution& o) const;

  /// Adds another distribution's counts (parallel partition merge).
  void merge_from(const ViewDistribution& o);

 private:
  std::map<std::vector<std::uint8_t>, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

struct EnumeratedViews {
  ViewDistribution master;
  ViewDistribution client1;
  ViewDistribution client2;
  std::uint64_t assignments = 0;
};

/// Runs every assignment through the real party pipeline and collects all
/// three view distributions. Throws CapacityError when the cost tops the
/// cap, ProtocolError if any faithful assignment reconstructs a wrong dot
/// product. jobs > 1 splits the assignment range; merging is order-free.
EnumeratedViews enumerate_views(const BitVector& a, const BitVector& b,
                                const SessionConfig& config,
                                std::uint64_t cap, unsigned jobs = 1);

struct CheckReport {
  std::string name;
  bool passed = false;
  std::uint64_t work = 0;  // assignments or sessions examined
  std::string detail;
};

/// Master view distributions must agree across every input pair with the
/// same dot product.
CheckReport check_master_privacy(const SessionConfig& config,
                                 std::uint64_t cap, unsigned jobs = 1);

/// Client view distributions must agree across all input pairs outright.
CheckReport check_client_privacy(const SessionConfig& config,
                                 std::uint64_t cap, unsigned jobs = 1);

/// Each sabotage variant must be caught by its designated check: the broken
/// key sum by master privacy, the missing xor mask by client privacy, the
/// raw pad by the structural comparison.
std::vector<CheckReport> check_sabotage_detection(const SessionConfig& config,
                                                  std::uint64_t cap,
                                                  unsigned jobs = 1);

struct StructuralComparison {
  bool equal = false;
  std::string detail;
};

/// Compares the master-bound message skeletons (count, tags, slot indices,
/// payload lengths) of one seeded session per configuration.
StructuralComparison compare_structure(const SessionConfig& config_a,
                                       const SessionConfig& config_b);

struct DistributionalComparison {
  bool equal = false;
  std::uint64_t assignments_a = 0;
  std::uint64_t assignments_b = 0;
  std::string witness;
};

/// Exact master-view distribution equality between two faithful
/// configurations with the same padded total and modulus, at the
/// representative inputs a = b = 1^y 0^(n-y). Conditions cell by cell on the
/// master's pre-shared randomness, so only distribution shape remains.
DistributionalComparison compare_master_distributions(
    const SessionConfig& config_a, const SessionConfig& config_b,
    std::size_t y, std::uint64_t cap);

/// Master distribution through the flat evaluation kernel, byte-compatible
/// with enumerate_views; ties the lean path to the party pipeline.
ViewDistribution master_distribution_flat(const BitVector& a,
                                          const BitVector& b,
                                          const SessionConfig& config,
                                          std::uint64_t cap);

/// Input with dot product y against itself: 1^y 0^(n-y).
BitVector representative_input(std::size_t n, std::size_t y);

struct LengthHidingResult {
  StructuralComparison structural;
  bool distributional_ran = false;
  bool distributional_equal = true;
  std::string distributional_detail;
  std::uint64_t assignments = 0;

  bool passed() const {
    return structural.equal && (!distributional_ran || distributional_equal);
  }
};

/// Structural floor always; exact distributional comparison over every
/// shared result y when requested and the configurations differ.
LengthHidingResult check_length_hiding(const SessionConfig& config_a,
                                       const SessionConfig& config_b,
                                       bool distributional, std::uint64_t cap);

void write_audit_report(const std::vector<CheckReport>& checks,
                        std::ostream& os);

}  // namespace bimpc

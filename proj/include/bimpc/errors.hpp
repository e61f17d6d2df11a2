#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bimpc {

/// Invalid protocol parameters: bad modulus, modulus mismatch, q <= 2n.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed caller input: length mismatch, non-bit values, unparsable data.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A party received a message that its state machine cannot accept,
/// or oblivious-transfer shared state is inconsistent.
class ProtocolError : public std::runtime_error {
 public:
  explicit ProtocolError(const std::string& what) : std::runtime_error(what) {}
};

/// A deterministic replay stream ran out of injected values.
class EnumerationError : public std::runtime_error {
 public:
  explicit EnumerationError(const std::string& what)
      : std::runtime_error(what) {}
};

/// The reconstructed result fell outside its provable range.
class IntegrityError : public std::runtime_error {
 public:
  explicit IntegrityError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Simulation stalled: no deliverable messages but the run is incomplete.
class HarnessError : public std::runtime_error {
 public:
  explicit HarnessError(const std::string& what) : std::runtime_error(what) {}
};

/// An audit enumeration was refused because its cost exceeds the cap.
class CapacityError : public std::runtime_error {
 public:
  CapacityError(const std::string& what, std::uint64_t cost)
      : std::runtime_error(what), cost_(cost) {}

  std::uint64_t cost() const { return cost_; }

 private:
  std::uint64_t cost_;
};

}  // namespace bimpc

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace nbl {

/// Exact classification of a signal against a designated reference.
/// ValueH: equals the reference chip for chip (set for set).
/// ValueL: the common squeezed low value, all-zero / no spikes.
/// Invalid: anything else (faulty or out-of-alphabet signals).
enum class LogicClass { ValueH, ValueL, Invalid };

std::string_view to_string(LogicClass c);

/// Discrete-time random telegraph wave: one signed integer amplitude per
/// clock step ("chip"). Reference waves hold -1/+1 everywhere and the shared
/// low value is the all-zero signal. Faulty signals can carry other small
/// integers (a NOT applied to an invalid input yields +-2 chips) and are
/// represented faithfully rather than clamped.
class RtwSignal {
 public:
  explicit RtwSignal(std::vector<std::int32_t> chips);

  static RtwSignal zeros(std::size_t n_chips);

  std::size_t size() const noexcept { return chips_.size(); }
  std::int32_t chip(std::size_t i) const { return chips_[i]; }
  std::span<const std::int32_t> chips() const noexcept { return chips_; }

  /// True when every chip is -1 or +1.
  bool is_reference() const noexcept;
  bool is_zero() const noexcept;

  bool operator==(const RtwSignal&) const = default;

 private:
  std::vector<std::int32_t> chips_;
};

/// The squeezed L value: n_chips zeros.
RtwSignal zero_signal(std::size_t n_chips);

/// Unipolar, slot-aligned spike train: the set of occupied slot indices
/// within a fixed horizon. Slots are stored sorted ascending without
/// duplicates; the empty train is the shared low value.
class SpikeTrain {
 public:
  explicit SpikeTrain(std::size_t n_slots);
  SpikeTrain(std::size_t n_slots, std::vector<std::uint32_t> slots);

  std::size_t horizon() const noexcept { return n_slots_; }
  std::size_t spike_count() const noexcept { return slots_.size(); }
  bool empty() const noexcept { return slots_.empty(); }
  bool contains(std::uint32_t slot) const noexcept;
  std::span<const std::uint32_t> slots() const noexcept { return slots_; }

  bool operator==(const SpikeTrain&) const = default;

 private:
  std::size_t n_slots_;
  std::vector<std::uint32_t> slots_;
};

/// Chip-exact (set-exact) classification; no statistics involved.
/// Throws std::invalid_argument on horizon mismatch.
LogicClass classify(const RtwSignal& x, const RtwSignal& h_ref);
LogicClass classify(const SpikeTrain& x, const SpikeTrain& h_ref);

}  // namespace nbl

#include "nbl/signal.hpp"

#include <algorithm>
#include <stdexcept>

namespace nbl {

std::string_view to_string(LogicClass c) {
  switch (c) {
    case LogicClass::ValueH: return "H";
    case LogicClass::ValueL: return "L";
    case LogicClass::Invalid: return "INVALID";
  }
  return "?";
}

RtwSignal::RtwSignal(std::vector<std::int32_t> chips) : chips_(std::move(chips)) {
  if (chips_.empty()) {
    throw std::invalid_argument("RtwSignal: chip count must be >= 1");
  }
}

RtwSignal RtwSignal::zeros(std::size_t n_chips) {
  if (n_chips == 0) {
    throw std::invalid_argument("RtwSignal: chip count must be >= 1");
  }
  return RtwSignal(std::vector<std::int32_t>(n_chips, 0));
}

bool RtwSignal::is_reference() const noexcept {
  return std::all_of(chips_.begin(), chips_.end(),
                     [](std::int32_t c) { return c == 1 || c == -1; });
}

bool RtwSignal::is_zero() const noexcept {
  return std::all_of(chips_.begin(), chips_.end(),
                     [](std::int32_t c) { return c == 0; });
}

RtwSignal zero_signal(std::size_t n_chips) { return RtwSignal::zeros(n_chips); }

SpikeTrain::SpikeTrain(std::size_t n_slots) : n_slots_(n_slots) {
  if (n_slots_ == 0) {
    throw std::invalid_argument("SpikeTrain: horizon must be >= 1");
  }
}

SpikeTrain::SpikeTrain(std::size_t n_slots, std::vector<std::uint32_t> slots)
    : n_slots_(n_slots), slots_(std::move(slots)) {
  if (n_slots_ == 0) {
    throw std::invalid_argument("SpikeTrain: horizon must be >= 1");
  }
  std::sort(slots_.begin(), slots_.end());
  slots_.erase(std::unique(slots_.begin(), slots_.end()), slots_.end());
  if (!slots_.empty() && slots_.back() >= n_slots_) {
    throw std::invalid_argument("SpikeTrain: slot index out of range");
  }
}

bool SpikeTrain::contains(std::uint32_t slot) const noexcept {
  return std::binary_search(slots_.begin(), slots_.end(), slot);
}

LogicClass classify(const RtwSignal& x, const RtwSignal& h_ref) {
  if (x.size() != h_ref.size()) {
    throw std::invalid_argument("classify: chip length mismatch");
  }
  if (x == h_ref) return LogicClass::ValueH;
  if (x.is_zero()) return LogicClass::ValueL;
  return LogicClass::Invalid;
}

LogicClass classify(const SpikeTrain& x, const SpikeTrain& h_ref) {
  if (x.horizon() != h_ref.horizon()) {
    throw std::invalid_argument("classify: horizon mismatch");
  }
  if (x == h_ref) return LogicClass::ValueH;
  if (x.empty()) return LogicClass::ValueL;
  return LogicClass::Invalid;
}

}  // namespace nbl

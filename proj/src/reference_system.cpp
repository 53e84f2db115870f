#include "nbl/reference_system.hpp"

#include <stdexcept>

#include "nbl/random.hpp"

namespace nbl {

std::string_view to_string(Backend b) {
  return b == Backend::Rtw ? "rtw" : "spike";
}

RtwSignal gen_rtw(std::mt19937_64& stream, std::size_t n_chips) {
  if (n_chips == 0) {
    throw std::invalid_argument("gen_rtw: chip count must be >= 1");
  }
  std::vector<std::int32_t> chips(n_chips);
  std::size_t i = 0;
  while (i < n_chips) {
    std::uint64_t word = stream();
    const std::size_t block = std::min<std::size_t>(64, n_chips - i);
    for (std::size_t b = 0; b < block; ++b, ++i) {
      chips[i] = (word & 1) ? 1 : -1;
      word >>= 1;
    }
  }
  return RtwSignal(std::move(chips));
}

std::vector<SpikeTrain> gen_disjoint_spike_trains(std::uint64_t master_seed,
                                                  std::size_t ref_count,
                                                  std::size_t n_slots,
                                                  double density) {
  if (ref_count == 0) {
    throw std::invalid_argument("gen_disjoint_spike_trains: ref count must be >= 1");
  }
  if (n_slots == 0) {
    throw std::invalid_argument("gen_disjoint_spike_trains: horizon must be >= 1");
  }
  if (density < 0.0 || static_cast<double>(ref_count) * density > 1.0) {
    throw std::invalid_argument(
        "gen_disjoint_spike_trains: need 0 <= ref_count * density <= 1");
  }
  std::mt19937_64 rng = make_stream(master_seed, 0);
  std::vector<std::vector<std::uint32_t>> slots(ref_count);
  const double total = static_cast<double>(ref_count) * density;
  for (std::size_t t = 0; t < n_slots; ++t) {
    const double u = uniform01(rng);
    if (u < total) {
      auto ref = static_cast<std::size_t>(u / density);
      if (ref >= ref_count) ref = ref_count - 1;  // guard the rounding edge
      slots[ref].push_back(static_cast<std::uint32_t>(t));
    }
  }
  std::vector<SpikeTrain> trains;
  trains.reserve(ref_count);
  for (auto& s : slots) {
    trains.emplace_back(n_slots, std::move(s));
  }
  return trains;
}

ReferenceSystem::ReferenceSystem(Backend backend, std::uint64_t master_seed,
                                 std::size_t horizon, double density)
    : backend_(backend),
      master_seed_(master_seed),
      horizon_(horizon),
      density_(density) {}

ReferenceSystem ReferenceSystem::rtw(std::uint64_t master_seed,
                                     std::size_t ref_count, std::size_t n_chips) {
  if (ref_count == 0) {
    throw std::invalid_argument("ReferenceSystem: ref count must be >= 1");
  }
  ReferenceSystem sys(Backend::Rtw, master_seed, n_chips, 0.0);
  sys.rtw_refs_.reserve(ref_count);
  for (std::size_t i = 0; i < ref_count; ++i) {
    std::mt19937_64 stream = make_stream(master_seed, i);
    sys.rtw_refs_.push_back(gen_rtw(stream, n_chips));
  }
  return sys;
}

ReferenceSystem ReferenceSystem::spike(std::uint64_t master_seed,
                                       std::size_t ref_count, std::size_t n_slots,
                                       double density) {
  ReferenceSystem sys(Backend::Spike, master_seed, n_slots, density);
  sys.spike_refs_ = gen_disjoint_spike_trains(master_seed, ref_count, n_slots, density);
  return sys;
}

std::size_t ReferenceSystem::size() const noexcept {
  return backend_ == Backend::Rtw ? rtw_refs_.size() : spike_refs_.size();
}

double ReferenceSystem::spike_density() const {
  if (backend_ != Backend::Spike) {
    throw std::invalid_argument("spike_density: RTW backend has no density");
  }
  return density_;
}

const RtwSignal& ReferenceSystem::rtw_ref(std::size_t i) const {
  if (backend_ != Backend::Rtw) {
    throw std::invalid_argument("rtw_ref: not an RTW system");
  }
  return rtw_refs_.at(i);
}

const SpikeTrain& ReferenceSystem::spike_ref(std::size_t i) const {
  if (backend_ != Backend::Spike) {
    throw std::invalid_argument("spike_ref: not a spike system");
  }
  return spike_refs_.at(i);
}

}  // namespace nbl

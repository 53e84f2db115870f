#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "nbl/signal.hpp"

namespace nbl {

enum class Backend { Rtw, Spike };

std::string_view to_string(Backend b);

/// Fresh reference RTW: every chip independently -1 or +1 with probability
/// 1/2 (equivalent to redrawing the sign at each step). Consumes 64 chips
/// per engine output.
RtwSignal gen_rtw(std::mt19937_64& stream, std::size_t n_chips);

/// Pairwise-disjoint spike trains over a shared horizon. Per slot one
/// outcome is drawn: silent with probability 1 - ref_count * density, or
/// train i fires with probability density each, so at most one train
/// occupies any slot. Requires ref_count >= 1 and ref_count * density <= 1.
std::vector<SpikeTrain> gen_disjoint_spike_trains(std::uint64_t master_seed,
                                                  std::size_t ref_count,
                                                  std::size_t n_slots,
                                                  double density);

/// A seeded family of pairwise-orthogonal reference signals H_1..H_m plus
/// the implicit shared L ("no signal"). Orthogonality is statistical
/// independence for the RTW backend and exact slot disjointness for the
/// spike backend. Reference 0 doubles as the shared H of a binary network.
/// Rebuilding with the same master seed and parameters reproduces the exact
/// same family.
class ReferenceSystem {
 public:
  static ReferenceSystem rtw(std::uint64_t master_seed, std::size_t ref_count,
                             std::size_t n_chips);
  static ReferenceSystem spike(std::uint64_t master_seed, std::size_t ref_count,
                               std::size_t n_slots, double density);

  Backend backend() const noexcept { return backend_; }
  std::size_t size() const noexcept;
  std::size_t horizon() const noexcept { return horizon_; }
  std::uint64_t master_seed() const noexcept { return master_seed_; }

  /// Per-slot firing probability; spike backend only.
  double spike_density() const;

  const RtwSignal& rtw_ref(std::size_t i) const;
  const SpikeTrain& spike_ref(std::size_t i) const;

 private:
  ReferenceSystem(Backend backend, std::uint64_t master_seed,
                  std::size_t horizon, double density);

  Backend backend_;
  std::uint64_t master_seed_;
  std::size_t horizon_;
  double density_;
  std::vector<RtwSignal> rtw_refs_;
  std::vector<SpikeTrain> spike_refs_;
};

}  // namespace nbl

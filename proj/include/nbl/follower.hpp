#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "nbl/signal.hpp"

namespace nbl {

enum class AverageMode { Boxcar, Exponential };

/// Discretized FOLLOWER stage: correlate with the reference, time-average,
/// threshold. Boxcar averaging admits an exact binomial oracle; the
/// exponential mode approximates the analog RC integrator and carries Monte
/// Carlo checks only.
struct FollowerConfig {
  AverageMode mode = AverageMode::Boxcar;
  std::size_t window = 16;  ///< boxcar width in chips/slots
  double alpha = 0.1;       ///< exponential smoothing factor in (0, 1]
  double theta = 0.5;       ///< threshold in (0, 1); decide H iff mean >= theta
};

/// Throws std::invalid_argument when a field is out of range.
void validate(const FollowerConfig& cfg);

enum class DcBit { L, H, Undecided };

/// One DC decision per averaging position. Boxcar mode has one entry per
/// full window (n - W + 1 of them); exponential mode one per chip. Undecided
/// marks spike-mode windows containing no reference spike.
struct FollowerResult {
  std::vector<DcBit> trace;
  DcBit final_bit = DcBit::Undecided;  // decision at the last position
};

/// RTW backend: windowed mean of the chipwise product x*h against theta.
/// Decides H exactly on mean >= theta (ties decide H).
FollowerResult follower(const RtwSignal& x, const RtwSignal& h,
                        const FollowerConfig& cfg);

/// Spike backend: windowed coincidence count normalized by the reference
/// spikes in the same window.
FollowerResult follower(const SpikeTrain& x, const SpikeTrain& h,
                        const FollowerConfig& cfg);

/// Per-chip/per-slot fast-error process: each chip flips sign (each slot
/// toggles membership) independently with probability p_fast, driven by a
/// dedicated seed stream.
struct ErrorModel {
  double p_fast = 0.0;  ///< in [0, 1]; the removal guarantees assume < 0.5
  std::uint64_t seed = 0;
};

void validate(const ErrorModel& em);

RtwSignal inject_errors(const RtwSignal& x, double p_fast, std::mt19937_64& stream);
SpikeTrain inject_errors(const SpikeTrain& x, double p_fast, std::mt19937_64& stream);
RtwSignal inject_errors(const RtwSignal& x, const ErrorModel& em);
SpikeTrain inject_errors(const SpikeTrain& x, const ErrorModel& em);

}  // namespace nbl

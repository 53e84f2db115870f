#pragma once

#include <cstdint>
#include <random>

namespace nbl {

/// Derives an independent 64-bit seed for a named child stream (SplitMix64
/// finalizer over the master/stream pair). All randomness in the library
/// flows through this: reference i draws from stream i, trial t from
/// stream t, so regeneration and parallel execution stay reproducible.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream) noexcept;

/// Generator for one derived stream. mt19937_64 output is fully specified
/// by the standard, so a given build reproduces signals bit for bit.
std::mt19937_64 make_stream(std::uint64_t master_seed, std::uint64_t stream);

/// Uniform double in [0, 1) using 53 bits of the next engine output.
double uniform01(std::mt19937_64& rng);

/// Bernoulli(p) draw; consumes exactly one engine output.
bool bernoulli(std::mt19937_64& rng, double p);

}  // namespace nbl

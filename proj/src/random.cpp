#include "nbl/random.hpp"

namespace nbl {

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream) noexcept {
  // SplitMix64 finalizer over master + stream * golden gamma.
  std::uint64_t z = master_seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::mt19937_64 make_stream(std::uint64_t master_seed, std::uint64_t stream) {
  return std::mt19937_64(derive_seed(master_seed, stream));
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

bool bernoulli(std::mt19937_64& rng, double p) {
  return uniform01(rng) < p;
}

}  // namespace nbl

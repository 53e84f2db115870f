#pragma once

#include <cstdint>

namespace nbl {

/// P[X = k] for X ~ Binomial(n, p). Computed in log space, so tails far
/// below DBL_MIN-sized terms still come out with full relative accuracy.
double binomial_pmf(std::uint64_t n, std::uint64_t k, double p);

/// P[X >= k0].
double binomial_tail_ge(std::uint64_t n, double p, std::uint64_t k0);

/// P[X <= k1].
double binomial_tail_le(std::uint64_t n, double p, std::uint64_t k1);

}  // namespace nbl

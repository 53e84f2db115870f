#pragma once

#include <cstddef>
#include <vector>

#include "nbl/signal.hpp"

namespace nbl {

/// Sliding boxcar mean of the chipwise product x*y. Output index t covers
/// chips [t, t+window). Output length is n - window + 1.
/// Throws std::invalid_argument on length mismatch or window out of [1, n].
std::vector<double> cross_correlation(const RtwSignal& x, const RtwSignal& y,
                                      std::size_t window);

/// Which operand of coincidence_fraction normalizes the overlap count.
enum class CoincidenceRef { First, Second };

/// |a intersect b| / |reference|, the spike analog of the correlator.
/// Throws std::invalid_argument on horizon mismatch and std::domain_error
/// when the normalizing train is empty (the statistic is undefined).
double coincidence_fraction(const SpikeTrain& a, const SpikeTrain& b,
                            CoincidenceRef reference);

}  // namespace nbl

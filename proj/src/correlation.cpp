#include "nbl/correlation.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

namespace nbl {

std::vector<double> cross_correlation(const RtwSignal& x, const RtwSignal& y,
                                      std::size_t window) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("cross_correlation: chip length mismatch");
  }
  const std::size_t n = x.size();
  if (window < 1 || window > n) {
    throw std::invalid_argument("cross_correlation: window out of [1, n]");
  }
  std::vector<std::int64_t> prod(n);
  for (std::size_t i = 0; i < n; ++i) {
    prod[i] = static_cast<std::int64_t>(x.chip(i)) * y.chip(i);
  }
  std::vector<double> means(n - window + 1);
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < window; ++i) sum += prod[i];
  means[0] = static_cast<double>(sum) / static_cast<double>(window);
  for (std::size_t t = window; t < n; ++t) {
    sum += prod[t] - prod[t - window];
    means[t - window + 1] = static_cast<double>(sum) / static_cast<double>(window);
  }
  return means;
}

double coincidence_fraction(const SpikeTrain& a, const SpikeTrain& b,
                            CoincidenceRef reference) {
  if (a.horizon() != b.horizon()) {
    throw std::invalid_argument("coincidence_fraction: horizon mismatch");
  }
  const SpikeTrain& ref = reference == CoincidenceRef::First ? a : b;
  if (ref.empty()) {
    throw std::domain_error(
        "coincidence_fraction: normalizing train is empty, statistic undefined");
  }
  std::size_t overlap = 0;
  auto ia = a.slots().begin();
  auto ib = b.slots().begin();
  while (ia != a.slots().end() && ib != b.slots().end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++overlap;
      ++ia;
      ++ib;
    }
  }
  return static_cast<double>(overlap) / static_cast<double>(ref.spike_count());
}

}  // namespace nbl

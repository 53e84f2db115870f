#include "nbl/binomial.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace nbl {

namespace {

void check_p(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("binomial: p must be in [0, 1]");
  }
}

double log_pmf(std::uint64_t n, std::uint64_t k, double p) {
  const double dn = static_cast<double>(n);
  const double dk = static_cast<double>(k);
  return std::lgamma(dn + 1.0) - std::lgamma(dk + 1.0) - std::lgamma(dn - dk + 1.0) +
         dk * std::log(p) + (dn - dk) * std::log1p(-p);
}

// Sum of pmf terms for k in [lo, hi], accumulated relative to the largest
// log term so tails far below DBL_MIN keep full relative accuracy.
double sum_range(std::uint64_t n, double p, std::uint64_t lo, std::uint64_t hi) {
  if (lo > hi) return 0.0;
  if (p == 0.0) return lo == 0 ? 1.0 : 0.0;
  if (p == 1.0) return hi == n ? 1.0 : 0.0;
  std::vector<double> logs;
  logs.reserve(hi - lo + 1);
  double max_log = -HUGE_VAL;
  for (std::uint64_t k = lo; k <= hi; ++k) {
    const double l = log_pmf(n, k, p);
    logs.push_back(l);
    if (l > max_log) max_log = l;
  }
  double acc = 0.0;
  for (double l : logs) acc += std::exp(l - max_log);
  const double result = std::exp(max_log) * acc;
  return result > 1.0 ? 1.0 : result;  // clip accumulated rounding
}

}  // namespace

double binomial_pmf(std::uint64_t n, std::uint64_t k, double p) {
  check_p(p);
  if (k > n) {
    throw std::invalid_argument("binomial_pmf: k > n");
  }
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (p == 1.0) return k == n ? 1.0 : 0.0;
  return std::exp(log_pmf(n, k, p));
}

double binomial_tail_ge(std::uint64_t n, double p, std::uint64_t k0) {
  check_p(p);
  if (k0 == 0) return 1.0;
  if (k0 > n) return 0.0;
  return sum_range(n, p, k0, n);
}

double binomial_tail_le(std::uint64_t n, double p, std::uint64_t k1) {
  check_p(p);
  if (k1 >= n) return 1.0;
  return sum_range(n, p, 0, k1);
}

}  // namespace nbl

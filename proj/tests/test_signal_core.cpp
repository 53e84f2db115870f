#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "nbl/correlation.hpp"
#include "nbl/random.hpp"
#include "nbl/reference_system.hpp"
#include "nbl/signal.hpp"

using namespace nbl;

namespace {

RtwSignal make_signal(std::initializer_list<std::int32_t> chips) {
  return RtwSignal(std::vector<std::int32_t>(chips));
}

// Exact binomial numerators via Pascal's triangle; the independent oracle
// for every p = 1/2 statistic in this file.
std::vector<unsigned __int128> binomial_row(std::size_t n) {
  std::vector<unsigned __int128> row(n + 1, 1);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t k = i; k-- > 1;) row[k] += row[k - 1];
  }
  return row;
}

}  // namespace

TEST_CASE("gen_rtw produces unit-amplitude chips") {
  auto rng = make_stream(42, 0);
  const RtwSignal s = gen_rtw(rng, 8);
  REQUIRE(s.size() == 8);
  for (std::int32_t c : s.chips()) {
    CHECK((c == 1 || c == -1));
  }
  CHECK(s.is_reference());
}

TEST_CASE("gen_rtw is deterministic for a given stream") {
  auto a = make_stream(7, 3);
  auto b = make_stream(7, 3);
  CHECK(gen_rtw(a, 4096) == gen_rtw(b, 4096));

  auto c = make_stream(7, 4);
  CHECK(gen_rtw(c, 4096) != gen_rtw(b, 4096));
}

TEST_CASE("gen_rtw +1 fraction matches the binomial oracle at n=1e6") {
  constexpr std::size_t n = 1'000'000;
  auto rng = make_stream(11, 0);
  const RtwSignal s = gen_rtw(rng, n);
  const auto plus = static_cast<double>(
      std::count(s.chips().begin(), s.chips().end(), 1));
  // 3 sigma of Bin(1e6, 1/2)/1e6 = 3 * sqrt(0.25/1e6)
  CHECK(std::abs(plus / n - 0.5) <= 0.0015);
}

TEST_CASE("gen_rtw rejects zero length") {
  auto rng = make_stream(1, 0);
  CHECK_THROWS_AS(gen_rtw(rng, 0), std::invalid_argument);
}

TEST_CASE("zero_signal") {
  const RtwSignal z = zero_signal(4);
  CHECK(z == make_signal({0, 0, 0, 0}));
  CHECK(z.is_zero());

  auto rng = make_stream(5, 0);
  const RtwSignal h = gen_rtw(rng, 4);
  CHECK(classify(z, h) == LogicClass::ValueL);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(z.chip(i) * h.chip(i) == 0);
  }
  CHECK_THROWS_AS(zero_signal(0), std::invalid_argument);
}

TEST_CASE("spike trains from one system are pairwise disjoint") {
  for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
    const auto trains = gen_disjoint_spike_trains(seed, 2, 5000, 0.3);
    REQUIRE(trains.size() == 2);
    for (std::uint32_t s : trains[0].slots()) {
      CHECK_FALSE(trains[1].contains(s));
    }
  }
}

TEST_CASE("spike train sizes match the binomial oracle") {
  const auto trains = gen_disjoint_spike_trains(5, 4, 100'000, 0.1);
  REQUIRE(trains.size() == 4);
  for (const SpikeTrain& t : trains) {
    // 3 sigma of Bin(1e5, 0.1) is about 285
    CHECK(std::abs(static_cast<double>(t.spike_count()) - 10'000.0) <= 285.0);
  }
}

TEST_CASE("spike generation edge cases") {
  const auto empty = gen_disjoint_spike_trains(1, 1, 100, 0.0);
  CHECK(empty[0].empty());
  CHECK_THROWS_AS(gen_disjoint_spike_trains(1, 3, 100, 0.4), std::invalid_argument);
  CHECK_THROWS_AS(gen_disjoint_spike_trains(1, 0, 100, 0.1), std::invalid_argument);
}

TEST_CASE("cross_correlation of a reference with itself is exactly 1") {
  auto rng = make_stream(8, 0);
  const RtwSignal h = gen_rtw(rng, 300);
  for (std::size_t w : {1, 16, 300}) {
    for (double m : cross_correlation(h, h, w)) CHECK(m == 1.0);
  }
}

TEST_CASE("cross_correlation with the zero signal is exactly 0") {
  auto rng = make_stream(8, 1);
  const RtwSignal y = gen_rtw(rng, 128);
  for (double m : cross_correlation(zero_signal(128), y, 16)) CHECK(m == 0.0);
}

TEST_CASE("cross_correlation window means follow the exact W=16 distribution") {
  constexpr std::size_t kWindow = 16;
  constexpr std::size_t n = 1'000'000;
  auto rng = make_stream(21, 0);
  const RtwSignal x = gen_rtw(rng, n);
  const RtwSignal y = gen_rtw(rng, n);
  const auto means = cross_correlation(x, y, kWindow);

  // Disjoint windows are iid; the mean is (2k - 16)/16 with k ~ Bin(16, 1/2).
  std::vector<std::size_t> counts(kWindow + 1, 0);
  std::size_t samples = 0;
  for (std::size_t t = 0; t < means.size(); t += kWindow) {
    const auto k = static_cast<std::size_t>(
        std::lround((means[t] * kWindow + kWindow) / 2.0));
    REQUIRE(k <= kWindow);
    ++counts[k];
    ++samples;
  }
  const auto row = binomial_row(kWindow);
  for (std::size_t k = 0; k <= kWindow; ++k) {
    const double p = static_cast<double>(row[k]) / 65536.0;
    const double emp = static_cast<double>(counts[k]) / static_cast<double>(samples);
    const double bound =
        4.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(samples)) +
        2.0 / static_cast<double>(samples);
    CHECK(std::abs(emp - p) <= bound);
  }
}

TEST_CASE("cross_correlation argument errors") {
  auto rng = make_stream(1, 0);
  const RtwSignal a = gen_rtw(rng, 16);
  const RtwSignal b = gen_rtw(rng, 8);
  CHECK_THROWS_AS(cross_correlation(a, b, 4), std::invalid_argument);
  CHECK_THROWS_AS(cross_correlation(a, a, 0), std::invalid_argument);
  CHECK_THROWS_AS(cross_correlation(a, a, 17), std::invalid_argument);
}

TEST_CASE("coincidence_fraction") {
  const SpikeTrain a(8, {1, 3, 5});
  const SpikeTrain b(8, {3, 4, 5});
  CHECK(coincidence_fraction(a, b, CoincidenceRef::First) == doctest::Approx(2.0 / 3.0));
  CHECK(coincidence_fraction(a, a, CoincidenceRef::First) == 1.0);
  const SpikeTrain c(8, {0, 2});
  CHECK(coincidence_fraction(a, c, CoincidenceRef::First) == 0.0);
  CHECK_THROWS_AS(coincidence_fraction(a, SpikeTrain(8), CoincidenceRef::Second),
                  std::domain_error);
  CHECK_THROWS_AS(coincidence_fraction(a, SpikeTrain(9, {1}), CoincidenceRef::First),
                  std::invalid_argument);
}

TEST_CASE("classify is chip-exact") {
  auto rng = make_stream(13, 0);
  const RtwSignal h = gen_rtw(rng, 64);
  CHECK(classify(h, h) == LogicClass::ValueH);
  CHECK(classify(zero_signal(64), h) == LogicClass::ValueL);

  std::vector<std::int32_t> chips(h.chips().begin(), h.chips().end());
  chips[17] = -chips[17];
  CHECK(classify(RtwSignal(chips), h) == LogicClass::Invalid);
  CHECK_THROWS_AS(classify(zero_signal(63), h), std::invalid_argument);

  const SpikeTrain sh(32, {1, 5, 7});
  CHECK(classify(sh, sh) == LogicClass::ValueH);
  CHECK(classify(SpikeTrain(32), sh) == LogicClass::ValueL);
  CHECK(classify(SpikeTrain(32, {1, 5}), sh) == LogicClass::Invalid);
  CHECK_THROWS_AS(classify(SpikeTrain(31), sh), std::invalid_argument);
}

TEST_CASE("reference systems regenerate bit-identically") {
  const auto a = ReferenceSystem::rtw(1234, 3, 2048);
  const auto b = ReferenceSystem::rtw(1234, 3, 2048);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a.rtw_ref(i) == b.rtw_ref(i));
    CHECK(classify(a.rtw_ref(i), a.rtw_ref(i)) == LogicClass::ValueH);
  }

  const auto c = ReferenceSystem::spike(99, 4, 4096, 0.05);
  const auto d = ReferenceSystem::spike(99, 4, 4096, 0.05);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(c.spike_ref(i) == d.spike_ref(i));
    CHECK(classify(c.spike_ref(i), c.spike_ref(i)) == LogicClass::ValueH);
  }
}

TEST_CASE("independent RTW pairs have zero mean and 1/n variance") {
  constexpr std::size_t n = 4096;
  constexpr std::size_t pairs = 1000;
  const auto sys = ReferenceSystem::rtw(2025, 2 * pairs, n);

  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t p = 0; p < pairs; ++p) {
    const double m =
        cross_correlation(sys.rtw_ref(2 * p), sys.rtw_ref(2 * p + 1), n)[0];
    sum += m;
    sum_sq += m * m;
  }
  const double mean_of_means = sum / pairs;
  const double var = sum_sq / pairs;

  // Full-length mean = (2k - n)/n with k ~ Bin(n, 1/2): the mean of K pair
  // means has sd 1/sqrt(nK); the K-average of squared means has expectation
  // 1/n and sd sqrt(2n(n-1)/n^4/K) (E[S^4] = 3n^2 - 2n for S a sum of n
  // iid +-1). Both asserted at 3 sigma.
  CHECK(std::abs(mean_of_means) <= 3.0 / std::sqrt(static_cast<double>(n) * pairs));
  const double sd_var = std::sqrt(2.0 * n * (n - 1.0) / (std::pow(n, 4.0) * pairs));
  CHECK(std::abs(var - 1.0 / n) <= 3.0 * sd_var);
}

TEST_CASE("pairwise correlation stays below 5/sqrt(n) across seeds") {
  constexpr std::size_t n = 4096;
  std::size_t hits = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto sys = ReferenceSystem::rtw(seed, 2, n);
    const double m = cross_correlation(sys.rtw_ref(0), sys.rtw_ref(1), n)[0];
    if (std::abs(m) < 5.0 / std::sqrt(static_cast<double>(n))) ++hits;
  }
  CHECK(hits >= 990);  // 5-sigma bound, essentially every seed
}

TEST_CASE("signal type invariants") {
  CHECK_THROWS_AS(RtwSignal(std::vector<std::int32_t>{}), std::invalid_argument);
  CHECK_THROWS_AS(SpikeTrain(0), std::invalid_argument);
  CHECK_THROWS_AS(SpikeTrain(4, {4}), std::invalid_argument);

  const SpikeTrain dedup(8, {5, 1, 5, 3, 1});
  CHECK(dedup.spike_count() == 3);
  CHECK(dedup == SpikeTrain(8, {1, 3, 5}));
}

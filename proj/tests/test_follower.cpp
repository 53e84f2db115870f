#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "nbl/follower.hpp"
#include "nbl/random.hpp"
#include "nbl/reference_system.hpp"

using namespace nbl;

namespace {

FollowerConfig boxcar(std::size_t window, double theta = 0.5) {
  FollowerConfig cfg;
  cfg.mode = AverageMode::Boxcar;
  cfg.window = window;
  cfg.theta = theta;
  return cfg;
}

FollowerConfig ema(double alpha, double theta = 0.5) {
  FollowerConfig cfg;
  cfg.mode = AverageMode::Exponential;
  cfg.alpha = alpha;
  cfg.theta = theta;
  return cfg;
}

bool all_bits(const FollowerResult& r, DcBit expected) {
  return std::all_of(r.trace.begin(), r.trace.end(),
                     [expected](DcBit b) { return b == expected; });
}

}  // namespace

TEST_CASE("noise-free follower reproduces classify for every window") {
  auto rng = make_stream(70, 0);
  const RtwSignal h = gen_rtw(rng, 200);
  const RtwSignal z = zero_signal(200);
  for (std::size_t w : {1, 2, 3, 16, 64, 200}) {
    const auto on_h = follower(h, h, boxcar(w));
    CHECK(on_h.trace.size() == 200 - w + 1);
    CHECK(all_bits(on_h, DcBit::H));  // mean is exactly 1 in every window
    CHECK(on_h.final_bit == DcBit::H);

    const auto on_z = follower(z, h, boxcar(w));
    CHECK(all_bits(on_z, DcBit::L));  // mean is exactly 0
    CHECK(on_z.final_bit == DcBit::L);
  }
}

TEST_CASE("threshold ties decide H") {
  // Product pattern +1,+1,+1,-1 over W=4: mean 0.5 equals theta.
  const RtwSignal h(std::vector<std::int32_t>{1, 1, 1, 1});
  const RtwSignal x(std::vector<std::int32_t>{1, 1, 1, -1});
  CHECK(follower(x, h, boxcar(4)).final_bit == DcBit::H);
  // One more mismatch drops the mean to 0, below theta.
  const RtwSignal x2(std::vector<std::int32_t>{1, 1, -1, -1});
  CHECK(follower(x2, h, boxcar(4)).final_bit == DcBit::L);
}

TEST_CASE("follower trace positions slide chip by chip") {
  // Products: -1 -1 +1 +1 -> W=2 means: -1, 0, 1 -> L, L(<0.5), H
  const RtwSignal h(std::vector<std::int32_t>{1, 1, 1, 1});
  const RtwSignal x(std::vector<std::int32_t>{-1, -1, 1, 1});
  const auto r = follower(x, h, boxcar(2));
  REQUIRE(r.trace.size() == 3);
  CHECK(r.trace[0] == DcBit::L);
  CHECK(r.trace[1] == DcBit::L);
  CHECK(r.trace[2] == DcBit::H);
}

TEST_CASE("exponential mode converges to the correct bit") {
  auto rng = make_stream(71, 0);
  const RtwSignal h = gen_rtw(rng, 400);
  CHECK(follower(h, h, ema(0.1)).final_bit == DcBit::H);
  CHECK(follower(zero_signal(400), h, ema(0.1)).final_bit == DcBit::L);
  // The EMA needs time to cross theta from its zero start.
  const auto r = follower(h, h, ema(0.05));
  CHECK(r.trace.front() == DcBit::L);
  CHECK(r.trace.back() == DcBit::H);
}

TEST_CASE("spike follower decides from windowed coincidences") {
  const auto sys = ReferenceSystem::spike(8, 1, 512, 0.5);
  const SpikeTrain& h = sys.spike_ref(0);
  const auto on_h = follower(h, h, boxcar(16));
  CHECK(on_h.final_bit == DcBit::H);
  for (DcBit b : on_h.trace) {
    CHECK(b != DcBit::L);  // every decided window sees full coincidence
  }
  const auto on_empty = follower(SpikeTrain(512), h, boxcar(16));
  for (DcBit b : on_empty.trace) {
    CHECK(b != DcBit::H);
  }
}

TEST_CASE("spike exponential mode converges like the boxcar") {
  const auto sys = ReferenceSystem::spike(17, 2, 2000, 0.3);
  const SpikeTrain& h = sys.spike_ref(0);
  CHECK(follower(h, h, ema(0.1)).final_bit == DcBit::H);
  CHECK(follower(SpikeTrain(2000), h, ema(0.1)).final_bit == DcBit::L);
  // Disjoint reference: zero coincidences, so the ratio stays at 0.
  CHECK(follower(sys.spike_ref(1), h, ema(0.1)).final_bit == DcBit::L);
  // Before any reference spike arrives the ratio is undefined.
  const auto r = follower(h, SpikeTrain(2000, {1000}), ema(0.1));
  CHECK(r.trace.front() == DcBit::Undecided);
}

TEST_CASE("spike windows without reference spikes are flagged undecided") {
  // Reference spikes only in the first 8 slots; later windows see none.
  const SpikeTrain h(64, {0, 1, 2, 3, 4, 5, 6, 7});
  const auto r = follower(h, h, boxcar(8));
  CHECK(r.trace.front() == DcBit::H);
  CHECK(r.final_bit == DcBit::Undecided);
  CHECK(std::count(r.trace.begin(), r.trace.end(), DcBit::Undecided) > 0);
}

TEST_CASE("follower argument validation") {
  auto rng = make_stream(72, 0);
  const RtwSignal h = gen_rtw(rng, 8);
  CHECK_THROWS_AS(follower(h, h, boxcar(9)), std::invalid_argument);
  CHECK_THROWS_AS(follower(h, gen_rtw(rng, 9), boxcar(4)), std::invalid_argument);
  CHECK_THROWS_AS(follower(h, h, boxcar(0)), std::invalid_argument);
  CHECK_THROWS_AS(follower(h, h, boxcar(4, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(follower(h, h, boxcar(4, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(follower(h, h, ema(0.0)), std::invalid_argument);
  CHECK_THROWS_AS(follower(h, h, ema(1.5)), std::invalid_argument);
}

TEST_CASE("inject_errors endpoints") {
  auto rng = make_stream(73, 0);
  const RtwSignal x = gen_rtw(rng, 1000);

  auto s0 = make_stream(1, 0);
  CHECK(inject_errors(x, 0.0, s0) == x);
  auto s1 = make_stream(1, 0);
  const RtwSignal flipped = inject_errors(x, 1.0, s1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(flipped.chip(i) == -x.chip(i));
  }

  const SpikeTrain t(100, {3, 50, 99});
  auto s2 = make_stream(1, 0);
  CHECK(inject_errors(t, 0.0, s2) == t);
  auto s3 = make_stream(1, 0);
  const SpikeTrain complement = inject_errors(t, 1.0, s3);
  CHECK(complement.spike_count() == 97);
  for (std::uint32_t s : t.slots()) {
    CHECK_FALSE(complement.contains(s));
  }
}

TEST_CASE("inject_errors flip count matches the binomial oracle") {
  auto rng = make_stream(74, 0);
  const RtwSignal x = gen_rtw(rng, 1'000'000);
  auto stream = make_stream(74, 1);
  const RtwSignal y = inject_errors(x, 0.1, stream);
  std::size_t flips = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y.chip(i) != x.chip(i)) ++flips;
  }
  // 3 sigma of Bin(1e6, 0.1) = 900
  CHECK(std::abs(static_cast<double>(flips) - 100'000.0) <= 900.0);
}

TEST_CASE("inject_errors is deterministic under the error model seed") {
  auto rng = make_stream(75, 0);
  const RtwSignal x = gen_rtw(rng, 512);
  const ErrorModel em{0.25, 42};
  CHECK(inject_errors(x, em) == inject_errors(x, em));
  CHECK(inject_errors(x, ErrorModel{0.25, 43}) != inject_errors(x, em));
  CHECK_THROWS_AS(inject_errors(x, ErrorModel{1.5, 0}), std::invalid_argument);
}

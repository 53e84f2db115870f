#include "nbl/follower.hpp"

#include <cstddef>
#include <stdexcept>

#include "nbl/random.hpp"

namespace nbl {

void validate(const FollowerConfig& cfg) {
  if (cfg.mode == AverageMode::Boxcar && cfg.window < 1) {
    throw std::invalid_argument("FollowerConfig: window must be >= 1");
  }
  if (cfg.mode == AverageMode::Exponential &&
      !(cfg.alpha > 0.0 && cfg.alpha <= 1.0)) {
    throw std::invalid_argument("FollowerConfig: alpha must be in (0, 1]");
  }
  if (!(cfg.theta > 0.0 && cfg.theta < 1.0)) {
    throw std::invalid_argument("FollowerConfig: theta must be in (0, 1)");
  }
}

namespace {

DcBit decide(double mean, double theta) {
  return mean >= theta ? DcBit::H : DcBit::L;  // ties decide H
}

}  // namespace

FollowerResult follower(const RtwSignal& x, const RtwSignal& h,
                        const FollowerConfig& cfg) {
  validate(cfg);
  if (x.size() != h.size()) {
    throw std::invalid_argument("follower: chip length mismatch");
  }
  const std::size_t n = x.size();
  std::vector<std::int64_t> prod(n);
  for (std::size_t i = 0; i < n; ++i) {
    prod[i] = static_cast<std::int64_t>(x.chip(i)) * h.chip(i);
  }

  FollowerResult result;
  if (cfg.mode == AverageMode::Boxcar) {
    const std::size_t w = cfg.window;
    if (n < w) {
      throw std::invalid_argument("follower: horizon shorter than window");
    }
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < w; ++i) sum += prod[i];
    result.trace.reserve(n - w + 1);
    result.trace.push_back(
        decide(static_cast<double>(sum) / static_cast<double>(w), cfg.theta));
    for (std::size_t t = w; t < n; ++t) {
      sum += prod[t] - prod[t - w];
      result.trace.push_back(
          decide(static_cast<double>(sum) / static_cast<double>(w), cfg.theta));
    }
  } else {
    double v = 0.0;
    result.trace.reserve(n);
    for (std::size_t t = 0; t < n; ++t) {
      v += cfg.alpha * (static_cast<double>(prod[t]) - v);
      result.trace.push_back(decide(v, cfg.theta));
    }
  }
  result.final_bit = result.trace.back();
  return result;
}

FollowerResult follower(const SpikeTrain& x, const SpikeTrain& h,
                        const FollowerConfig& cfg) {
  validate(cfg);
  if (x.horizon() != h.horizon()) {
    throw std::invalid_argument("follower: horizon mismatch");
  }
  const std::size_t n = h.horizon();
  std::vector<std::uint8_t> h_mask(n, 0);
  std::vector<std::uint8_t> c_mask(n, 0);  // coincidences X intersect H
  for (std::uint32_t s : h.slots()) h_mask[s] = 1;
  for (std::uint32_t s : x.slots()) {
    if (h_mask[s]) c_mask[s] = 1;
  }

  FollowerResult result;
  if (cfg.mode == AverageMode::Boxcar) {
    const std::size_t w = cfg.window;
    if (n < w) {
      throw std::invalid_argument("follower: horizon shorter than window");
    }
    std::int64_t h_count = 0;
    std::int64_t c_count = 0;
    auto push = [&result, &cfg](std::int64_t c, std::int64_t hh) {
      if (hh == 0) {
        result.trace.push_back(DcBit::Undecided);  // no reference spike in window
      } else {
        result.trace.push_back(
            decide(static_cast<double>(c) / static_cast<double>(hh), cfg.theta));
      }
    };
    for (std::size_t i = 0; i < w; ++i) {
      h_count += h_mask[i];
      c_count += c_mask[i];
    }
    result.trace.reserve(n - w + 1);
    push(c_count, h_count);
    for (std::size_t t = w; t < n; ++t) {
      h_count += h_mask[t] - h_mask[t - w];
      c_count += c_mask[t] - c_mask[t - w];
      push(c_count, h_count);
    }
  } else {
    double eh = 0.0;
    double ec = 0.0;
    result.trace.reserve(n);
    for (std::size_t t = 0; t < n; ++t) {
      eh += cfg.alpha * (static_cast<double>(h_mask[t]) - eh);
      ec += cfg.alpha * (static_cast<double>(c_mask[t]) - ec);
      if (eh == 0.0) {
        result.trace.push_back(DcBit::Undecided);
      } else {
        result.trace.push_back(decide(ec / eh, cfg.theta));
      }
    }
  }
  result.final_bit = result.trace.back();
  return result;
}

void validate(const ErrorModel& em) {
  if (!(em.p_fast >= 0.0 && em.p_fast <= 1.0)) {
    throw std::invalid_argument("ErrorModel: p_fast must be in [0, 1]");
  }
}

RtwSignal inject_errors(const RtwSignal& x, double p_fast, std::mt19937_64& stream) {
  if (!(p_fast >= 0.0 && p_fast <= 1.0)) {
    throw std::invalid_argument("inject_errors: p_fast must be in [0, 1]");
  }
  std::vector<std::int32_t> chips(x.chips().begin(), x.chips().end());
  for (std::int32_t& c : chips) {
    if (bernoulli(stream, p_fast)) c = -c;
  }
  return RtwSignal(std::move(chips));
}

SpikeTrain inject_errors(const SpikeTrain& x, double p_fast, std::mt19937_64& stream) {
  if (!(p_fast >= 0.0 && p_fast <= 1.0)) {
    throw std::invalid_argument("inject_errors: p_fast must be in [0, 1]");
  }
  const std::size_t n = x.horizon();
  std::vector<std::uint8_t> mask(n, 0);
  for (std::uint32_t s : x.slots()) mask[s] = 1;
  std::vector<std::uint32_t> slots;
  for (std::size_t t = 0; t < n; ++t) {
    const bool flip = bernoulli(stream, p_fast);
    if (static_cast<bool>(mask[t]) != flip) {
      slots.push_back(static_cast<std::uint32_t>(t));
    }
  }
  return SpikeTrain(n, std::move(slots));
}

RtwSignal inject_errors(const RtwSignal& x, const ErrorModel& em) {
  validate(em);
  std::mt19937_64 stream = make_stream(em.seed, 0);
  return inject_errors(x, em.p_fast, stream);
}

SpikeTrain inject_errors(const SpikeTrain& x, const ErrorModel& em) {
  validate(em);
  std::mt19937_64 stream = make_stream(em.seed, 0);
  return inject_errors(x, em.p_fast, stream);
}

}  // namespace nbl

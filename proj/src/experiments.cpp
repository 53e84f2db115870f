#include "nbl/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "nbl/binomial.hpp"
#include "nbl/random.hpp"

namespace nbl {

namespace {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

unsigned thread_budget() {
  const char* env = std::getenv("NBL_THREADS");
  if (env == nullptr) return 1;
  const long parsed = std::strtol(env, nullptr, 10);
  if (parsed <= 1) return 1;
  return static_cast<unsigned>(std::min<long>(parsed, 64));
}

// Runs per_trial(counters, t) for t in [0, trials), split across the
// NBL_THREADS budget. Counters merge by +=, so the result is identical to
// the serial run regardless of the split.
template <typename Counters, typename Fn>
Counters run_trials(std::uint64_t trials, Fn per_trial) {
  const unsigned threads = thread_budget();
  if (threads <= 1 || trials < 4ULL * threads) {
    Counters total{};
    for (std::uint64_t t = 0; t < trials; ++t) per_trial(total, t);
    return total;
  }
  std::vector<Counters> parts(threads);
  std::vector<std::thread> pool;
  const std::uint64_t chunk = (trials + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    const std::uint64_t lo = w * chunk;
    const std::uint64_t hi = std::min<std::uint64_t>(lo + chunk, trials);
    pool.emplace_back([&parts, &per_trial, w, lo, hi] {
      for (std::uint64_t t = lo; t < hi; ++t) per_trial(parts[w], t);
    });
  }
  for (auto& th : pool) th.join();
  Counters total{};
  for (const Counters& part : parts) total += part;
  return total;
}

double binomial_std_error(double rate, std::uint64_t n) {
  if (n == 0) return 0.0;
  return std::sqrt(rate * (1.0 - rate) / static_cast<double>(n));
}

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

std::string_view experiment_csv_header() {
  return "experiment,backend,seed,trials,W,theta,p_fast,measured,oracle,stderr,wall_ms";
}

std::string to_csv_row(const ExperimentReport& r) {
  std::ostringstream out;
  out << r.experiment << ',' << to_string(r.backend) << ',' << r.seed << ','
      << r.trials << ',';
  if (r.window) out << *r.window;
  out << ',';
  if (r.theta) out << format_number(*r.theta);
  out << ',';
  if (r.p_fast) out << format_number(*r.p_fast);
  out << ',' << format_number(r.measured) << ',';
  if (r.oracle) out << format_number(*r.oracle);
  out << ',' << format_number(r.std_error) << ',' << format_number(r.wall_ms);
  return out.str();
}

void append_csv(const std::filesystem::path& path,
                std::span<const ExperimentReport> reports) {
  namespace fs = std::filesystem;
  std::error_code ec;
  const bool has_content = fs::exists(path, ec) && fs::file_size(path, ec) > 0;
  std::ofstream out(path, std::ios::app);
  if (!out) {
    throw std::runtime_error("append_csv: cannot open '" + path.string() + "'");
  }
  if (!has_content) out << experiment_csv_header() << '\n';
  for (const ExperimentReport& r : reports) out << to_csv_row(r) << '\n';
}

std::size_t decision_count_threshold(std::size_t window, double theta) {
  if (window < 1) {
    throw std::invalid_argument("decision_count_threshold: window must be >= 1");
  }
  for (std::size_t k = 0; k <= window; ++k) {
    const double mean = static_cast<double>(2.0 * static_cast<double>(k) -
                                            static_cast<double>(window)) /
                        static_cast<double>(window);
    if (mean >= theta) return k;  // same comparison the follower applies
  }
  return window + 1;
}

double follower_miss_probability(std::size_t window, double theta, double p_fast) {
  const std::size_t k0 = decision_count_threshold(window, theta);
  if (k0 == 0) return 0.0;
  if (k0 > window) return 1.0;
  return binomial_tail_le(window, 1.0 - p_fast, k0 - 1);
}

double follower_false_alarm_probability(std::size_t window, double theta) {
  const std::size_t k0 = decision_count_threshold(window, theta);
  if (k0 > window) return 0.0;
  return binomial_tail_ge(window, 0.5, k0);
}

namespace {

struct WrongCount {
  std::uint64_t wrong = 0;
  std::uint64_t undecided = 0;

  WrongCount& operator+=(const WrongCount& o) {
    wrong += o.wrong;
    undecided += o.undecided;
    return *this;
  }
};

}  // namespace

MisclassificationReport measure_misclassification(const ReferenceSystem& sys,
                                                  const FollowerConfig& cfg,
                                                  const ErrorModel& em,
                                                  std::uint64_t trials) {
  validate(cfg);
  validate(em);
  if (trials == 0) {
    throw std::invalid_argument("measure_misclassification: trials must be >= 1");
  }
  if (cfg.window < 1) {
    throw std::invalid_argument("measure_misclassification: window must be >= 1");
  }
  if (sys.backend() == Backend::Spike && 2.0 * sys.spike_density() > 1.0) {
    // Each trial draws a fresh 2-reference disjoint system.
    throw std::invalid_argument(
        "measure_misclassification: spike density must be <= 0.5");
  }
  const std::size_t horizon = cfg.window;  // one decision window per trial

  auto run_side = [&](bool miss_side) {
    return run_trials<WrongCount>(trials, [&](WrongCount& c, std::uint64_t t) {
      // Even streams feed the miss side, odd the false-alarm side, so the
      // two measurements use independent material.
      const std::uint64_t stream_id = 2 * t + (miss_side ? 0 : 1);
      DcBit bit = DcBit::Undecided;
      if (sys.backend() == Backend::Rtw) {
        std::mt19937_64 sig = make_stream(sys.master_seed(), stream_id);
        const RtwSignal h = gen_rtw(sig, horizon);
        RtwSignal x = miss_side ? h : gen_rtw(sig, horizon);
        std::mt19937_64 err = make_stream(em.seed, stream_id);
        x = inject_errors(x, em.p_fast, err);
        bit = follower(x, h, cfg).final_bit;
      } else {
        const auto trains = gen_disjoint_spike_trains(
            derive_seed(sys.master_seed(), stream_id), 2, horizon,
            sys.spike_density());
        const SpikeTrain& h = trains[0];
        SpikeTrain x = miss_side ? trains[0] : trains[1];
        std::mt19937_64 err = make_stream(em.seed, stream_id);
        x = inject_errors(x, em.p_fast, err);
        bit = follower(x, h, cfg).final_bit;
      }
      if (bit == DcBit::Undecided) {
        ++c.undecided;
      } else if (miss_side ? (bit != DcBit::H) : (bit == DcBit::H)) {
        ++c.wrong;
      }
    });
  };

  const bool exact_oracle =
      cfg.mode == AverageMode::Boxcar && sys.backend() == Backend::Rtw;

  auto fill = [&](const char* name, const WrongCount& c, double wall,
                  std::optional<double> oracle) {
    ExperimentReport r;
    r.experiment = name;
    r.backend = sys.backend();
    r.seed = sys.master_seed();
    r.trials = trials;
    r.window = cfg.window;
    r.theta = cfg.theta;
    r.p_fast = em.p_fast;
    const std::uint64_t decided = trials - c.undecided;
    r.measured = decided == 0
                     ? 0.0
                     : static_cast<double>(c.wrong) / static_cast<double>(decided);
    r.oracle = oracle;
    r.std_error = binomial_std_error(r.measured, decided);
    r.wall_ms = wall;
    return r;
  };

  MisclassificationReport report;
  auto t0 = Clock::now();
  const WrongCount miss = run_side(true);
  const double miss_ms = elapsed_ms(t0);
  t0 = Clock::now();
  const WrongCount fa = run_side(false);
  const double fa_ms = elapsed_ms(t0);

  report.miss = fill(
      "misclassify_miss", miss, miss_ms,
      exact_oracle ? std::optional<double>(follower_miss_probability(
                         cfg.window, cfg.theta, em.p_fast))
                   : std::nullopt);
  report.false_alarm = fill(
      "misclassify_false_alarm", fa, fa_ms,
      exact_oracle ? std::optional<double>(
                         follower_false_alarm_probability(cfg.window, cfg.theta))
                   : std::nullopt);
  report.miss_undecided = miss.undecided;
  report.false_alarm_undecided = fa.undecided;
  return report;
}

std::size_t required_window(double p_fast, double theta, double target_error) {
  if (!(theta > 0.0 && theta < 1.0)) {
    throw std::invalid_argument("required_window: theta must be in (0, 1)");
  }
  if (!(target_error > 0.0 && target_error < 1.0)) {
    throw std::invalid_argument("required_window: target_error must be in (0, 1)");
  }
  if (!(p_fast >= 0.0) || p_fast >= (1.0 - theta) / 2.0) {
    throw std::invalid_argument(
        "required_window: infeasible margin, need 0 <= p_fast < (1 - theta)/2");
  }
  // The exact tail is not monotone in W (parity wobble), so scan every W.
  // A single pmf term lower-bounds each tail, which rejects most windows in
  // O(1) before paying for the O(W) exact sums.
  constexpr std::size_t kMaxWindow = 8192;
  for (std::size_t w = 1; w <= kMaxWindow; ++w) {
    const std::size_t k0 = decision_count_threshold(w, theta);
    if (k0 > w) continue;  // never decides H, miss probability is 1
    if (binomial_pmf(w, k0, 0.5) > target_error) continue;
    if (k0 >= 1 && p_fast > 0.0 &&
        binomial_pmf(w, k0 - 1, 1.0 - p_fast) > target_error) {
      continue;
    }
    const double err = std::max(follower_miss_probability(w, theta, p_fast),
                                follower_false_alarm_probability(w, theta));
    if (err <= target_error) return w;
  }
  throw std::runtime_error(
      "required_window: no window up to " + std::to_string(kMaxWindow) +
      " reaches the target error");
}

namespace {

struct PropagationCount {
  std::uint64_t changed = 0;
  std::uint64_t predicted = 0;
  std::uint64_t disagreements = 0;

  PropagationCount& operator+=(const PropagationCount& o) {
    changed += o.changed;
    predicted += o.predicted;
    disagreements += o.disagreements;
    return *this;
  }
};

// Exact single-position difference propagation through {NOT, AND} gates:
// each wire carries its (baseline, faulted) value at the corrupted chip.
template <typename Value, typename NotFn, typename AndFn>
bool predict_output_change(const Circuit& c,
                           const std::unordered_map<std::string, std::pair<Value, Value>>& input_pairs,
                           NotFn not_fn, AndFn and_fn) {
  std::unordered_map<std::string, std::pair<Value, Value>> values(input_pairs);
  for (std::size_t gi : c.topo_order()) {
    const Gate& g = c.gates()[gi];
    if (g.kind == GateKind::Not) {
      const auto& x = values.at(g.inputs[0]);
      values.emplace(g.output, std::make_pair(not_fn(x.first), not_fn(x.second)));
    } else {
      const auto& x1 = values.at(g.inputs[0]);
      const auto& x2 = values.at(g.inputs[1]);
      values.emplace(g.output, std::make_pair(and_fn(x1.first, x2.first),
                                              and_fn(x1.second, x2.second)));
    }
  }
  for (const std::string& o : c.outputs()) {
    const auto& v = values.at(o);
    if (v.first != v.second) return true;
  }
  return false;
}

}  // namespace

PropagationReport measure_error_propagation(
    const Circuit& c, const Assignment& a, const ReferenceSystem& sys,
    std::uint64_t trials, const std::optional<std::string>& fault_input) {
  if (trials == 0) {
    throw std::invalid_argument("measure_error_propagation: trials must be >= 1");
  }
  const Circuit lowered = c.is_lowered() ? c : lower_circuit(c);
  const std::size_t n_inputs = lowered.inputs().size();
  if (n_inputs == 0) {
    throw std::invalid_argument("measure_error_propagation: circuit has no inputs");
  }
  for (const std::string& w : lowered.inputs()) {
    if (!a.contains(w)) {
      throw std::invalid_argument("measure_error_propagation: input '" + w +
                                  "' is unassigned");
    }
  }
  std::size_t fault_index = 0;
  if (fault_input) {
    const auto& ins = lowered.inputs();
    const auto it = std::find(ins.begin(), ins.end(), *fault_input);
    if (it == ins.end()) {
      throw std::invalid_argument("measure_error_propagation: '" + *fault_input +
                                  "' is not a circuit input");
    }
    fault_index = static_cast<std::size_t>(it - ins.begin());
  }
  const std::size_t horizon = sys.horizon();
  const auto t0 = Clock::now();

  PropagationCount counts;
  if (sys.backend() == Backend::Rtw) {
    const RtwSignal& h = sys.rtw_ref(0);
    std::map<std::string, RtwSignal> base_inputs;
    for (const std::string& w : lowered.inputs()) {
      base_inputs.emplace(w, a.at(w) ? h : zero_signal(horizon));
    }
    const RtwEvaluation baseline = evaluate_rtw(lowered, base_inputs, sys);

    counts = run_trials<PropagationCount>(trials, [&](PropagationCount& pc,
                                                      std::uint64_t t) {
      std::mt19937_64 rng = make_stream(sys.master_seed(), t);
      const std::size_t wi =
          fault_input ? fault_index
                      : std::uniform_int_distribution<std::size_t>(0, n_inputs - 1)(rng);
      const std::size_t chip =
          std::uniform_int_distribution<std::size_t>(0, horizon - 1)(rng);
      const std::string& wire = lowered.inputs()[wi];

      // Fault model: negate the chip; a zero chip becomes a +1 transient.
      auto corrupt = [](std::int32_t v) -> std::int32_t { return v == 0 ? 1 : -v; };

      std::map<std::string, RtwSignal> inputs = base_inputs;
      std::vector<std::int32_t> chips(inputs.at(wire).chips().begin(),
                                      inputs.at(wire).chips().end());
      chips[chip] = corrupt(chips[chip]);
      inputs.at(wire) = RtwSignal(std::move(chips));
      const RtwEvaluation faulted = evaluate_rtw(lowered, inputs, sys);
      bool changed = false;
      for (const std::string& o : lowered.outputs()) {
        if (faulted.wires.at(o) != baseline.wires.at(o)) {
          changed = true;
          break;
        }
      }

      const std::int32_t h_chip = h.chip(chip);
      std::unordered_map<std::string, std::pair<std::int32_t, std::int32_t>> pairs;
      for (std::size_t j = 0; j < n_inputs; ++j) {
        const std::string& w = lowered.inputs()[j];
        const std::int32_t base = a.at(w) ? h_chip : 0;
        pairs.emplace(w, std::make_pair(base, j == wi ? corrupt(base) : base));
      }
      // Same scalar arithmetic as the gates, narrowing cast included, so the
      // prediction can never drift from the simulation.
      const bool predicted = predict_output_change<std::int32_t>(
          lowered, pairs, [h_chip](std::int32_t v) { return h_chip - v; },
          [h_chip](std::int32_t v1, std::int32_t v2) {
            return static_cast<std::int32_t>(static_cast<std::int64_t>(v1) * v2 *
                                             h_chip);
          });

      pc.changed += changed ? 1 : 0;
      pc.predicted += predicted ? 1 : 0;
      pc.disagreements += changed != predicted ? 1 : 0;
    });
  } else {
    const SpikeTrain& h = sys.spike_ref(0);
    std::map<std::string, SpikeTrain> base_inputs;
    for (const std::string& w : lowered.inputs()) {
      base_inputs.emplace(w, a.at(w) ? h : SpikeTrain(horizon));
    }
    const SpikeEvaluation baseline = evaluate_spike(lowered, base_inputs, sys);

    counts = run_trials<PropagationCount>(trials, [&](PropagationCount& pc,
                                                      std::uint64_t t) {
      std::mt19937_64 rng = make_stream(sys.master_seed(), t);
      const std::size_t wi =
          fault_input ? fault_index
                      : std::uniform_int_distribution<std::size_t>(0, n_inputs - 1)(rng);
      const std::size_t slot =
          std::uniform_int_distribution<std::size_t>(0, horizon - 1)(rng);
      const std::string& wire = lowered.inputs()[wi];

      const SpikeTrain& base = base_inputs.at(wire);
      std::vector<std::uint32_t> slots(base.slots().begin(), base.slots().end());
      const auto s32 = static_cast<std::uint32_t>(slot);
      if (base.contains(s32)) {
        slots.erase(std::find(slots.begin(), slots.end(), s32));
      } else {
        slots.push_back(s32);
      }
      std::map<std::string, SpikeTrain> inputs = base_inputs;
      inputs.at(wire) = SpikeTrain(horizon, std::move(slots));
      const SpikeEvaluation faulted = evaluate_spike(lowered, inputs, sys);
      bool changed = false;
      for (const std::string& o : lowered.outputs()) {
        if (faulted.wires.at(o) != baseline.wires.at(o)) {
          changed = true;
          break;
        }
      }

      const bool h_spike = h.contains(s32);
      std::unordered_map<std::string, std::pair<bool, bool>> pairs;
      for (std::size_t j = 0; j < n_inputs; ++j) {
        const std::string& w = lowered.inputs()[j];
        const bool basev = a.at(w) && h_spike;
        pairs.emplace(w, std::make_pair(basev, j == wi ? !basev : basev));
      }
      const bool predicted = predict_output_change<bool>(
          lowered, pairs, [h_spike](bool v) { return h_spike && !v; },
          [](bool v1, bool v2) { return v1 && v2; });

      pc.changed += changed ? 1 : 0;
      pc.predicted += predicted ? 1 : 0;
      pc.disagreements += changed != predicted ? 1 : 0;
    });
  }

  PropagationReport result;
  result.report.experiment = "propagation";
  result.report.backend = sys.backend();
  result.report.seed = sys.master_seed();
  result.report.trials = trials;
  result.report.measured =
      static_cast<double>(counts.changed) / static_cast<double>(trials);
  result.report.oracle =
      static_cast<double>(counts.predicted) / static_cast<double>(trials);
  result.report.std_error = binomial_std_error(result.report.measured, trials);
  result.report.wall_ms = elapsed_ms(t0);
  result.disagreements = counts.disagreements;
  return result;
}

}  // namespace nbl

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "nbl/follower.hpp"
#include "nbl/netlist.hpp"
#include "nbl/reference_system.hpp"

namespace nbl {

/// One measured rate with its run parameters. Serializes to the fixed CSV
/// schema `experiment,backend,seed,trials,W,theta,p_fast,measured,oracle,
/// stderr,wall_ms`; fields that do not apply render empty.
struct ExperimentReport {
  std::string experiment;
  Backend backend = Backend::Rtw;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::optional<std::size_t> window;
  std::optional<double> theta;
  std::optional<double> p_fast;
  double measured = 0.0;
  std::optional<double> oracle;
  double std_error = 0.0;
  double wall_ms = 0.0;
};

std::string_view experiment_csv_header();
std::string to_csv_row(const ExperimentReport& report);

/// Appends rows to a CSV file, writing the header first when the file is new
/// or empty. Rerunning with the same seed appends byte-identical rows apart
/// from the wall_ms column.
void append_csv(const std::filesystem::path& path,
                std::span<const ExperimentReport> reports);

/// Smallest count k of reference-matching chips in a boxcar window for which
/// the follower decides H, i.e. the first k with (2k - W)/W >= theta.
/// Returns W + 1 when no count reaches the threshold. Uses the exact same
/// floating comparison as the follower, so the oracles below are
/// trial-for-trial consistent with it.
std::size_t decision_count_threshold(std::size_t window, double theta);

/// Exact boxcar oracles for the RTW follower. A miss is deciding L on a
/// corrupted H input (matching chips ~ Bin(W, 1 - p_fast)); a false alarm is
/// deciding H on an orthogonal input (matching chips ~ Bin(W, 1/2), which
/// chip flips leave unchanged).
double follower_miss_probability(std::size_t window, double theta, double p_fast);
double follower_false_alarm_probability(std::size_t window, double theta);

struct MisclassificationReport {
  ExperimentReport miss;         // X = H corrupted by the error model
  ExperimentReport false_alarm;  // X = independent reference, corrupted
  std::uint64_t miss_undecided = 0;         // spike windows with no reference spike,
  std::uint64_t false_alarm_undecided = 0;  // excluded from the denominators
};

/// Monte Carlo estimate of the follower misclassification rates. Each trial
/// generates fresh per-trial reference material over one window (derived
/// seed streams, so trials parallelize without changing results), corrupts
/// the input, and takes the follower's final decision. In boxcar RTW mode
/// the exact binomial oracle accompanies each rate.
MisclassificationReport measure_misclassification(const ReferenceSystem& sys,
                                                  const FollowerConfig& cfg,
                                                  const ErrorModel& em,
                                                  std::uint64_t trials);

/// Smallest boxcar window W whose exact misclassification probability
/// max(miss, false alarm) is at most target_error. The tail is not monotone
/// in W (parity), so the scan is exhaustive from W = 1 up to a search cap;
/// exceeding the cap throws std::runtime_error (statistical infeasibility),
/// while an infeasible margin p_fast >= (1 - theta)/2 or an out-of-range
/// argument throws std::invalid_argument.
std::size_t required_window(double p_fast, double theta, double target_error);

struct PropagationReport {
  ExperimentReport report;  // measured = simulated rate, oracle = predicted rate
  std::uint64_t disagreements = 0;  // trials where simulation and prediction differ
};

/// Single-fault error-propagation experiment: per trial, corrupt one chip
/// (slot) of one primary-input signal — a uniformly random input unless
/// fault_input pins one — and report the fraction of trials in which any
/// output signal changes anywhere. The prediction propagates the exact
/// single-chip difference through the lowered gates (a flip passes an AND
/// only where the co-input chip is nonzero; a NOT always passes it) and must
/// match the full simulation trial for trial.
PropagationReport measure_error_propagation(
    const Circuit& c, const Assignment& a, const ReferenceSystem& sys,
    std::uint64_t trials,
    const std::optional<std::string>& fault_input = std::nullopt);

}  // namespace nbl

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ise/estimator.hpp"
#include "ise/ise_system.hpp"
#include "ise/power_flow.hpp"
#include "ise/solvers.hpp"

namespace ise {

struct McOptions {
  int trials = 1000;
  std::uint64_t seed = 1;
  // Line parameters sampled per branch, uniform in [1-f, 1+f] times nominal.
  double line_fraction = 0.0;
  int threads = 1;
  ErrorSpec errors;
  Placements placements;
  PowerFlowOptions pf;
};

// Componentwise min/max over trials. Deterministic for a given (seed,
// trials): every trial draws from streams keyed by its index alone, and the
// min/max reduction commutes, so the thread count never changes the result.
struct McEnvelope {
  IntervalVector states;
  std::vector<std::array<VoltageBox, 3>> v;
  std::vector<std::array<Interval, 3>> v_mag;
  int trials = 0;
  int failures = 0;  // diverged or unobservable trials, excluded
  std::uint64_t seed = 0;
  double total_seconds = 0.0;
  double mean_trial_seconds = 0.0;
};

McEnvelope mc_envelope(const Feeder& f, const McOptions& opt);

// Mean interval width.
double q1(const IntervalVector& x);
// Maximum deviation of an endpoint from the true value, over all states.
double q2(const IntervalVector& x, const Vec& truth);

// Present-phase flattening in (bus document order, phase) order, pairing the
// interval and truth vectors for the metrics above.
IntervalVector flatten_magnitudes(const Feeder& f,
                                  const std::vector<std::array<VoltageBox, 3>>& v);
Vec flatten_truth_magnitudes(const Feeder& f, const TrueState& ts);

// True state vector in estimator layout.
Vec flatten_truth_states(const Feeder& f, const StateIndex& idx,
                         const TrueState& ts);

struct MethodRow {
  std::string method;
  double q1_mag = 0.0;
  double q2_mag = 0.0;
  // Voltage-interval width sums per phase, volts, real and imaginary parts.
  std::array<double, 3> width_sum_re{};
  std::array<double, 3> width_sum_im{};
  int iterations = 0;
  double time_initial = 0.0;
  double time_iterate = 0.0;
  double time_total = 0.0;
  bool contains_truth = false;
  bool contains_mc = false;  // meaningful only when an envelope was run
};

// Metrics of one solver run against the truth and optional envelope.
// Containment uses a tiny slack so touching bounds count as contained.
MethodRow evaluate_method(const Feeder& f, const IseSystem& sys,
                          const SolverReport& rep, const TrueState& truth,
                          const McEnvelope* mc);

std::string comparison_csv(const std::vector<MethodRow>& rows);

// Per bus/phase voltage-magnitude bounds: bus,phase,lo,hi,truth,mc_min,mc_max.
std::string report_csv(const Feeder& f,
                       const std::vector<std::array<VoltageBox, 3>>& v,
                       const TrueState& truth, const McEnvelope* mc);

inline constexpr double kContainSlack = 1e-9;

}  // namespace ise

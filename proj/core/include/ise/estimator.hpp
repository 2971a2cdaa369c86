#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ise/feeder.hpp"
#include "ise/interval_linalg.hpp"
#include "ise/measurements.hpp"

namespace ise {

// State layout: [slack v_re | slack v_im | branch i_re | branch i_im].
// Slack entries follow phase order; branch entries follow feeder document
// order with phases ascending inside a branch.
class StateIndex {
 public:
  static StateIndex build(const Feeder& f);

  std::size_t n() const { return 2 * (slack_phases_.size() + branch_phases_.size()); }
  std::size_t n_slack() const { return slack_phases_.size(); }
  std::size_t n_branch() const { return branch_phases_.size(); }

  std::size_t slack_re(Phase p) const;
  std::size_t slack_im(Phase p) const;
  std::size_t branch_re(std::size_t branch_idx, Phase p) const;
  std::size_t branch_im(std::size_t branch_idx, Phase p) const;

  const std::vector<Phase>& slack_phases() const { return slack_phases_; }
  const std::vector<std::pair<std::size_t, Phase>>& branch_phases() const {
    return branch_phases_;
  }

  // Human-readable column label for diagnostics, e.g. "i_re[632-645:B]".
  std::string col_name(std::size_t col, const Feeder& f) const;

 private:
  std::vector<Phase> slack_phases_;
  std::vector<std::pair<std::size_t, Phase>> branch_phases_;
  std::array<std::size_t, 3> slack_pos_{npos, npos, npos};
  std::map<std::pair<std::size_t, int>, std::size_t> branch_pos_;
};

// Linear measurement model H over the state. Voltage rows carry the interval
// line parameters along the slack path; current, flow and injection rows are
// thin +/-1 incidence entries.
IntervalMatrix build_jacobian(const Feeder& f, const StateIndex& idx,
                              const std::vector<RowSpec>& rows);

// Throws ObservabilityError naming the dependent columns when rank(H) < n.
void require_observable(const Mat& H, const Feeder& f, const StateIndex& idx);

// Weighted least squares on the midpoint system, rank-checked.
Vec solve_linear_wls(const Mat& H, const Vec& z, const Vec& w,
                     const Feeder& f, const StateIndex& idx);

// Point measurement values for the given rows. Power rows are converted to
// equivalent currents at the bus reference phasor: the slack phasor when
// v_ref is empty, otherwise the current voltage estimate.
Vec build_point_values(const Feeder& f, const MeasurementSet& ms,
                       const std::vector<RowSpec>& rows,
                       const std::vector<std::array<cd, 3>>& v_ref = {});
Vec build_point_weights(const Feeder& f, const MeasurementSet& ms,
                        const std::vector<RowSpec>& rows,
                        const std::vector<std::array<cd, 3>>& v_ref = {});

struct IterativeOptions {
  double tol = 1e-6;
  int max_iterations = 50;
  // Rank check costs a full QR; batch callers that verified the structure
  // once (the envelope runner) turn it off.
  bool check_observability = true;
};

struct IterativeResult {
  Vec x;
  std::vector<std::array<cd, 3>> v_bus;
  int iterations = 0;
  bool converged = false;
};

// Refines the equivalent-current references: solve, recompute bus voltages,
// rebuild power-row values and weights, repeat until the reference update
// falls below tol.
IterativeResult solve_iterative_wls(const Feeder& f, const MeasurementSet& ms,
                                    const IterativeOptions& opt = {});

struct VoltageBox {
  Interval re, im;
  bool present = false;
};

// Bus voltages from the state by walking the slack path, point and interval
// forms. The interval form evaluates the same linear expression as the
// voltage measurement rows.
std::vector<std::array<cd, 3>> states_to_bus_voltages(const Feeder& f,
                                                      const StateIndex& idx,
                                                      const Vec& x);
std::vector<std::array<VoltageBox, 3>> states_to_bus_voltages(
    const Feeder& f, const StateIndex& idx, const IntervalVector& x);

// Enclosure of |re + j im| over the box.
Interval box_magnitude(const VoltageBox& b);

}  // namespace ise

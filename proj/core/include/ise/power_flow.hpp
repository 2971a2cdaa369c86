#pragma once

#include <complex>
#include <map>

#include "ise/feeder.hpp"

namespace ise {

using cd = std::complex<double>;

struct TrueState {
  std::vector<std::array<cd, 3>> v_bus;      // by bus index, absent phases zero
  std::vector<std::array<cd, 3>> i_branch;   // by branch index, parent->child
  std::vector<std::array<PQ, 3>> flow_from;  // sending-end power per branch phase
  std::vector<std::array<PQ, 3>> net_load;   // consumption minus DG per bus phase
  std::map<std::string, std::array<PQ, 3>> dg_output;  // injection positive
  int sweeps = 0;
  double kcl_residual = 0.0;
  double max_dv = 0.0;
};

struct PowerFlowOptions {
  double tol = 1e-8;
  int max_sweeps = 100;
  // DG operating point as a fraction of the unit's band (0 = lower edge,
  // 1 = upper edge). Units not named run at 0.5.
  std::map<std::string, double> dg_fraction;
};

// Backward/forward sweep on the radial feeder with constant-power loads.
// Throws ConvergenceError when the voltage update never drops below tol.
TrueState solve_power_flow(const Feeder& f, const PowerFlowOptions& opt = {});

cd slack_phasor(const Feeder& f, Phase p);

}  // namespace ise

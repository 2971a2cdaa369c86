#include "ise/power_flow.hpp"

#include <cmath>
#include <numbers>

#include "ise/errors.hpp"

namespace ise {

cd slack_phasor(const Feeder& f, Phase p) {
  double theta = 0.0;
  if (p == Phase::B) theta = -2.0 * std::numbers::pi / 3.0;
  if (p == Phase::C) theta = 2.0 * std::numbers::pi / 3.0;
  return std::polar(f.v_slack_pu, theta);
}

TrueState solve_power_flow(const Feeder& f, const PowerFlowOptions& opt) {
  const std::size_t nb = f.buses.size();
  const std::size_t nl = f.branches.size();
  const std::size_t slack = f.slack_index();

  // DG operating points and net constant-power consumption per bus phase.
  std::vector<std::array<PQ, 3>> net(nb);
  for (std::size_t k = 0; k < nb; ++k) net[k] = f.buses[k].load;
  std::map<std::string, std::array<PQ, 3>> dg_out;
  for (const DgUnit& d : f.dg) {
    double frac = 0.5;
    if (auto it = opt.dg_fraction.find(d.id); it != opt.dg_fraction.end()) {
      frac = it->second;
      if (frac < 0.0 || frac > 1.0)
        throw std::invalid_argument("solve_power_flow: dg fraction outside [0, 1]");
    }
    DgPhasePower band = dg_phase_power(d, f.base_mva);
    std::array<PQ, 3> out{};
    std::size_t bi = f.bus_index(d.bus);
    for (Phase p : d.phases.list()) {
      int i = static_cast<int>(p);
      out[i].p = band.p.lo() + frac * (band.p.hi() - band.p.lo());
      double t = std::tan(std::acos(d.pf));
      out[i].q = (d.lagging ? 1.0 : -1.0) * out[i].p * t;
      net[bi][i].p -= out[i].p;
      net[bi][i].q -= out[i].q;
    }
    auto [it, fresh] = dg_out.emplace(d.id, out);
    if (!fresh)
      for (int i = 0; i < 3; ++i) {
        it->second[i].p += out[i].p;
        it->second[i].q += out[i].q;
      }
  }

  // Bus processing order: breadth first from the slack.
  std::vector<std::size_t> order;
  order.reserve(nb);
  order.push_back(slack);
  for (std::size_t h = 0; h < order.size(); ++h)
    for (std::size_t b : f.child_branches(order[h]))
      order.push_back(f.bus_index(f.branches[b].to));
  if (order.size() != nb)
    throw Error("solve_power_flow: traversal did not reach every bus");

  std::vector<std::array<cd, 3>> v(nb), inj(nb), ib(nl);
  for (std::size_t k = 0; k < nb; ++k)
    for (Phase p : f.buses[k].phases.list())
      v[k][static_cast<int>(p)] = slack_phasor(f, p);

  TrueState ts;
  ts.sweeps = 0;
  double dv = 0.0;
  for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    ++ts.sweeps;
    // Nodal consumption currents at present voltages.
    for (std::size_t k = 0; k < nb; ++k) {
      inj[k] = {};
      for (Phase p : f.buses[k].phases.list()) {
        int i = static_cast<int>(p);
        const PQ& s = net[k][i];
        if (s.p == 0.0 && s.q == 0.0) continue;
        cd vk = v[k][i];
        if (std::abs(vk) < 0.2)
          throw ConvergenceError("solve_power_flow: voltage collapse at bus '" +
                                 f.buses[k].id + "'");
        inj[k][i] = std::conj(cd(s.p, s.q) / vk);
      }
    }
    // Backward: branch currents, leaves first.
    for (std::size_t h = nb; h-- > 1;) {
      std::size_t k = order[h];
      std::size_t pb = f.parent_branch(k);
      std::array<cd, 3> total = inj[k];
      for (std::size_t cbr : f.child_branches(k))
        for (int i = 0; i < 3; ++i) total[i] += ib[cbr][i];
      for (int i = 0; i < 3; ++i)
        ib[pb][i] = f.branches[pb].phases.has(static_cast<Phase>(i)) ? total[i] : cd();
    }
    // Forward: voltage drops, root first.
    dv = 0.0;
    for (std::size_t h = 1; h < nb; ++h) {
      std::size_t k = order[h];
      std::size_t pb = f.parent_branch(k);
      const Branch& br = f.branches[pb];
      std::size_t par = f.bus_index(br.from);
      for (Phase p : br.phases.list()) {
        int i = static_cast<int>(p);
        cd drop;
        for (Phase q : br.phases.list()) {
          int j = static_cast<int>(q);
          cd z(br.r[i][j].mid(), br.x[i][j].mid());
          drop += z * ib[pb][j];
        }
        cd vn = v[par][i] - drop;
        dv = std::max(dv, std::abs(vn - v[k][i]));
        v[k][i] = vn;
      }
    }
    if (dv < opt.tol) break;
  }
  if (dv >= opt.tol)
    throw ConvergenceError("solve_power_flow: no convergence after " +
                           std::to_string(opt.max_sweeps) + " sweeps (dv = " +
                           std::to_string(dv) + ")");
  ts.max_dv = dv;

  ts.v_bus = v;
  ts.i_branch = ib;
  ts.net_load = net;
  ts.dg_output = std::move(dg_out);
  ts.flow_from.assign(nl, {});
  for (std::size_t b = 0; b < nl; ++b) {
    const Branch& br = f.branches[b];
    std::size_t from = f.bus_index(br.from);
    for (Phase p : br.phases.list()) {
      int i = static_cast<int>(p);
      cd s = v[from][i] * std::conj(ib[b][i]);
      ts.flow_from[b][i] = PQ{s.real(), s.imag()};
    }
  }

  // KCL audit: parent inflow equals children outflow plus consumption.
  double res = 0.0;
  for (std::size_t k = 0; k < nb; ++k) {
    if (k == slack) continue;
    std::size_t pb = f.parent_branch(k);
    for (Phase p : f.buses[k].phases.list()) {
      int i = static_cast<int>(p);
      cd sum = ib[pb][i] - inj[k][i];
      for (std::size_t cbr : f.child_branches(k)) sum -= ib[cbr][i];
      res = std::max(res, std::abs(sum));
    }
  }
  ts.kcl_residual = res;
  return ts;
}

}  // namespace ise

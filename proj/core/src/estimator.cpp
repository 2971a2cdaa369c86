#include "ise/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <tuple>

#include "ise/errors.hpp"
#include "ise/power_flow.hpp"

namespace ise {

StateIndex StateIndex::build(const Feeder& f) {
  StateIndex idx;
  idx.slack_phases_ = f.buses[f.slack_index()].phases.list();
  for (std::size_t i = 0; i < idx.slack_phases_.size(); ++i)
    idx.slack_pos_[static_cast<int>(idx.slack_phases_[i])] = i;
  for (std::size_t b = 0; b < f.branches.size(); ++b)
    for (Phase p : f.branches[b].phases.list()) {
      idx.branch_pos_[{b, static_cast<int>(p)}] = idx.branch_phases_.size();
      idx.branch_phases_.emplace_back(b, p);
    }
  return idx;
}

std::size_t StateIndex::slack_re(Phase p) const {
  std::size_t k = slack_pos_[static_cast<int>(p)];
  if (k == npos) throw std::logic_error("slack phase not present");
  return k;
}

std::size_t StateIndex::slack_im(Phase p) const {
  return n_slack() + slack_re(p);
}

std::size_t StateIndex::branch_re(std::size_t branch_idx, Phase p) const {
  auto it = branch_pos_.find({branch_idx, static_cast<int>(p)});
  if (it == branch_pos_.end()) throw std::logic_error("branch phase not present");
  return 2 * n_slack() + it->second;
}

std::size_t StateIndex::branch_im(std::size_t branch_idx, Phase p) const {
  return n_branch() + branch_re(branch_idx, p);
}

std::string StateIndex::col_name(std::size_t col, const Feeder& f) const {
  std::size_t ns = n_slack(), nb = n_branch();
  auto seg = [&](const char* tag, const std::string& el, Phase p) {
    return std::string(tag) + "[" + el + ":" + phase_letter(p) + "]";
  };
  if (col < ns) return seg("v_re", f.slack, slack_phases_[col]);
  if (col < 2 * ns) return seg("v_im", f.slack, slack_phases_[col - ns]);
  std::size_t k = col - 2 * ns;
  const char* tag = "i_re";
  if (k >= nb) {
    k -= nb;
    tag = "i_im";
  }
  auto [bi, p] = branch_phases_[k];
  return seg(tag, f.branches[bi].id, p);
}

namespace {

// Coefficients of V_bus(phase) as a linear form over the state, shared by
// the voltage measurement rows and the state-to-voltage extraction so both
// evaluate the identical expression.
void voltage_terms(const Feeder& f, const StateIndex& idx, std::size_t bus_idx,
                   Phase ph, bool imag,
                   std::vector<std::pair<std::size_t, Interval>>& out) {
  out.clear();
  out.emplace_back(imag ? idx.slack_im(ph) : idx.slack_re(ph), Interval(1.0));
  int row = static_cast<int>(ph);
  for (std::size_t br : f.path_to_slack(f.buses[bus_idx].id)) {
    const Branch& b = f.branches[br];
    for (Phase psi : b.phases.list()) {
      int col = static_cast<int>(psi);
      const Interval& r = b.r[row][col];
      const Interval& x = b.x[row][col];
      // V = V_slack - sum Z·I over the path, componentwise:
      //   Re: -(r·i_re - x·i_im)   Im: -(x·i_re + r·i_im)
      const Interval& c_re = imag ? x : r;
      const Interval& c_im = imag ? r : x;
      if (!(c_re.is_thin() && c_re.lo() == 0.0))
        out.emplace_back(idx.branch_re(br, psi), -c_re);
      if (!(c_im.is_thin() && c_im.lo() == 0.0))
        out.emplace_back(idx.branch_im(br, psi), imag ? -c_im : c_im);
    }
  }
}

std::vector<const Measurement*> bind_rows(const MeasurementSet& ms,
                                          const std::vector<RowSpec>& rows) {
  std::map<std::tuple<int, std::string, int>, const Measurement*> lut;
  for (const auto& m : ms.entries)
    lut[{static_cast<int>(m.kind), m.element, static_cast<int>(m.phase)}] = &m;
  std::vector<const Measurement*> out;
  out.reserve(rows.size());
  for (const auto& rs : rows) {
    auto it = lut.find(
        {static_cast<int>(rs.kind), rs.element, static_cast<int>(rs.phase)});
    if (it == lut.end())
      throw std::logic_error("row without measurement entry: " + rs.element);
    out.push_back(it->second);
  }
  return out;
}

cd ref_phasor(const Feeder& f, const std::vector<std::array<cd, 3>>& v_ref,
              const std::string& bus_id, Phase ph) {
  if (v_ref.empty()) return slack_phasor(f, ph);
  return v_ref[f.bus_index(bus_id)][static_cast<int>(ph)];
}

// Power rows reference the receiving bus for injections and the sending bus
// for flows.
cd row_ref(const Feeder& f, const std::vector<std::array<cd, 3>>& v_ref,
           const RowSpec& rs) {
  if (rs.kind == MeasKind::ScadaFlow)
    return ref_phasor(f, v_ref, f.branch(rs.element).from, rs.phase);
  return ref_phasor(f, v_ref, rs.element, rs.phase);
}

Vec point_values(const Feeder& f, const std::vector<const Measurement*>& binds,
                 const std::vector<RowSpec>& rows,
                 const std::vector<std::array<cd, 3>>& v_ref) {
  Vec z(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const RowSpec& rs = rows[i];
    const Measurement& m = *binds[i];
    if (rs.kind == MeasKind::PmuVoltage || rs.kind == MeasKind::PmuCurrent) {
      z[static_cast<Eigen::Index>(i)] =
          rs.imag ? m.mag * std::sin(m.angle) : m.mag * std::cos(m.angle);
    } else {
      auto [ir, ix] = power_to_equivalent_current(m.power.p, m.power.q,
                                                  row_ref(f, v_ref, rs));
      z[static_cast<Eigen::Index>(i)] = rs.imag ? ix : ir;
    }
  }
  return z;
}

Vec point_weights(const Feeder& f, const std::vector<const Measurement*>& binds,
                  const std::vector<RowSpec>& rows,
                  const std::vector<std::array<cd, 3>>& v_ref) {
  Vec w(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const RowSpec& rs = rows[i];
    const Measurement& m = *binds[i];
    double var;
    if (rs.kind == MeasKind::PmuVoltage || rs.kind == MeasKind::PmuCurrent) {
      var = m.sigma_mag * m.sigma_mag +
            (m.mag * m.sigma_angle) * (m.mag * m.sigma_angle);
    } else {
      double vm = std::abs(row_ref(f, v_ref, rs));
      double s = (rs.imag ? m.sigma_q : m.sigma_p) / vm;
      var = s * s;
    }
    w[static_cast<Eigen::Index>(i)] = 1.0 / var;
  }
  return w;
}

// One gain-matrix WLS step, H' W H x = H' W z, formed densely.
Vec normal_solve(const Mat& H, const Vec& w, const Vec& z) {
  Mat wh = w.asDiagonal() * H;
  Mat N = H.transpose() * wh;
  Vec rhs = wh.transpose() * z;
  return Eigen::LDLT<Mat>(N).solve(rhs);
}

}  // namespace

IntervalMatrix build_jacobian(const Feeder& f, const StateIndex& idx,
                              const std::vector<RowSpec>& rows) {
  IntervalMatrix H(rows.size(), idx.n());
  std::vector<std::pair<std::size_t, Interval>> terms;
  const Interval one(1.0), minus_one(-1.0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const RowSpec& rs = rows[i];
    switch (rs.kind) {
      case MeasKind::PmuVoltage: {
        voltage_terms(f, idx, f.bus_index(rs.element), rs.phase, rs.imag, terms);
        for (const auto& [col, c] : terms) H.add_entry(i, col, c);
        break;
      }
      case MeasKind::PmuCurrent:
      case MeasKind::ScadaFlow: {
        std::size_t br = f.branch_index(rs.element);
        H.set_entry(i, rs.imag ? idx.branch_im(br, rs.phase)
                               : idx.branch_re(br, rs.phase),
                    one);
        break;
      }
      case MeasKind::PseudoInjection:
      case MeasKind::DgBand: {
        // Current balance at the bus: inflow minus child outflows equals the
        // injected equivalent current.
        std::size_t bi = f.bus_index(rs.element);
        std::size_t pb = f.parent_branch(bi);
        if (pb == npos) throw std::logic_error("injection row at slack bus");
        auto col_of = [&](std::size_t br) {
          return rs.imag ? idx.branch_im(br, rs.phase)
                         : idx.branch_re(br, rs.phase);
        };
        H.set_entry(i, col_of(pb), one);
        for (std::size_t cb : f.child_branches(bi))
          if (f.branches[cb].phases.has(rs.phase))
            H.set_entry(i, col_of(cb), minus_one);
        break;
      }
    }
  }
  return H;
}

void require_observable(const Mat& H, const Feeder& f, const StateIndex& idx) {
  const Eigen::Index m = H.rows(), n = H.cols();
  if (m < n)
    throw ObservabilityError("only " + std::to_string(m) + " rows for " +
                             std::to_string(n) + " states");
  Eigen::ColPivHouseholderQR<Mat> qr(H);
  if (qr.rank() < n) {
    const auto& perm = qr.colsPermutation().indices();
    std::ostringstream os;
    os << "rank " << qr.rank() << " of " << n << "; dependent columns:";
    for (Eigen::Index k = qr.rank(); k < n; ++k)
      os << ' ' << idx.col_name(static_cast<std::size_t>(perm[k]), f);
    throw ObservabilityError(os.str());
  }
}

Vec solve_linear_wls(const Mat& H, const Vec& z, const Vec& w, const Feeder& f,
                     const StateIndex& idx) {
  require_observable(H, f, idx);
  Mat hw = H.transpose() * w.asDiagonal();
  Eigen::LDLT<Mat> ldlt(hw * H);
  if (ldlt.info() != Eigen::Success)
    throw PreconditionError("weighted normal matrix not positive definite");
  return ldlt.solve(hw * z);
}

Vec build_point_values(const Feeder& f, const MeasurementSet& ms,
                       const std::vector<RowSpec>& rows,
                       const std::vector<std::array<cd, 3>>& v_ref) {
  return point_values(f, bind_rows(ms, rows), rows, v_ref);
}

Vec build_point_weights(const Feeder& f, const MeasurementSet& ms,
                        const std::vector<RowSpec>& rows,
                        const std::vector<std::array<cd, 3>>& v_ref) {
  return point_weights(f, bind_rows(ms, rows), rows, v_ref);
}

IterativeResult solve_iterative_wls(const Feeder& f, const MeasurementSet& ms,
                                    const IterativeOptions& opt) {
  StateIndex idx = StateIndex::build(f);
  MeasurementVector z1 = build_z1(f, ms), z2 = build_z2(f, ms);
  std::vector<RowSpec> rows = std::move(z1.rows);
  rows.insert(rows.end(), z2.rows.begin(), z2.rows.end());
  IntervalMatrix H = build_jacobian(f, idx, rows);
  std::vector<const Measurement*> binds = bind_rows(ms, rows);
  Mat Hd = H.mid_dense();

  IterativeResult res;
  std::vector<std::array<cd, 3>> v_ref;  // empty = slack phasor everywhere
  for (int it = 1; it <= opt.max_iterations; ++it) {
    Vec z = point_values(f, binds, rows, v_ref);
    Vec w = point_weights(f, binds, rows, v_ref);
    if (it == 1 && opt.check_observability) {
      res.x = solve_linear_wls(Hd, z, w, f, idx);
    } else {
      res.x = normal_solve(Hd, w, z);
    }
    std::vector<std::array<cd, 3>> v_new = states_to_bus_voltages(f, idx, res.x);
    double delta = 1.0;
    if (!v_ref.empty()) {
      delta = 0.0;
      for (std::size_t b = 0; b < v_new.size(); ++b)
        for (int p = 0; p < 3; ++p)
          delta = std::max(delta, std::abs(v_new[b][p] - v_ref[b][p]));
    }
    v_ref = std::move(v_new);
    res.iterations = it;
    if (delta < opt.tol) {
      res.converged = true;
      break;
    }
  }
  res.v_bus = std::move(v_ref);
  return res;
}

std::vector<std::array<cd, 3>> states_to_bus_voltages(const Feeder& f,
                                                      const StateIndex& idx,
                                                      const Vec& x) {
  std::vector<std::array<cd, 3>> v(f.buses.size());
  std::vector<std::pair<std::size_t, Interval>> terms;
  for (std::size_t b = 0; b < f.buses.size(); ++b)
    for (Phase ph : f.buses[b].phases.list()) {
      double comp[2];
      for (int imag = 0; imag < 2; ++imag) {
        voltage_terms(f, idx, b, ph, imag != 0, terms);
        double s = 0.0;
        for (const auto& [col, c] : terms)
          s += c.mid() * x[static_cast<Eigen::Index>(col)];
        comp[imag] = s;
      }
      v[b][static_cast<int>(ph)] = cd(comp[0], comp[1]);
    }
  return v;
}

std::vector<std::array<VoltageBox, 3>> states_to_bus_voltages(
    const Feeder& f, const StateIndex& idx, const IntervalVector& x) {
  std::vector<std::array<VoltageBox, 3>> v(f.buses.size());
  std::vector<std::pair<std::size_t, Interval>> terms;
  for (std::size_t b = 0; b < f.buses.size(); ++b)
    for (Phase ph : f.buses[b].phases.list()) {
      VoltageBox box;
      box.present = true;
      for (int imag = 0; imag < 2; ++imag) {
        voltage_terms(f, idx, b, ph, imag != 0, terms);
        Interval s(0.0);
        for (const auto& [col, c] : terms) s += c * x[col];
        (imag ? box.im : box.re) = s;
      }
      v[b][static_cast<int>(ph)] = box;
    }
  return v;
}

Interval box_magnitude(const VoltageBox& b) {
  return sqrt(square(b.re) + square(b.im));
}

}  // namespace ise

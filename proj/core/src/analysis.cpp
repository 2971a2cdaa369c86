#include "ise/analysis.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ise/errors.hpp"
#include "ise/rng.hpp"

namespace ise {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

struct TrialOut {
  Vec x;
  std::vector<std::array<cd, 3>> v;
};

// Thread-local reduction state; merging commutes, so partitioning trials
// across threads cannot change the envelope.
struct Acc {
  bool any = false;
  Vec xmin, xmax;
  std::vector<std::array<double, 3>> re_min, re_max, im_min, im_max, mag_min,
      mag_max;
  int failures = 0;
  double trial_seconds = 0.0;

  void add(const TrialOut& t) {
    if (!any) {
      any = true;
      xmin = t.x;
      xmax = t.x;
      std::size_t nb = t.v.size();
      re_min.assign(nb, {0, 0, 0});
      re_max = im_min = im_max = mag_min = mag_max = re_min;
      for (std::size_t b = 0; b < nb; ++b)
        for (int p = 0; p < 3; ++p) {
          cd v = t.v[b][p];
          re_min[b][p] = re_max[b][p] = v.real();
          im_min[b][p] = im_max[b][p] = v.imag();
          mag_min[b][p] = mag_max[b][p] = std::abs(v);
        }
      return;
    }
    xmin = xmin.cwiseMin(t.x);
    xmax = xmax.cwiseMax(t.x);
    for (std::size_t b = 0; b < t.v.size(); ++b)
      for (int p = 0; p < 3; ++p) {
        cd v = t.v[b][p];
        re_min[b][p] = std::min(re_min[b][p], v.real());
        re_max[b][p] = std::max(re_max[b][p], v.real());
        im_min[b][p] = std::min(im_min[b][p], v.imag());
        im_max[b][p] = std::max(im_max[b][p], v.imag());
        mag_min[b][p] = std::min(mag_min[b][p], std::abs(v));
        mag_max[b][p] = std::max(mag_max[b][p], std::abs(v));
      }
  }

  void merge(const Acc& o) {
    int f_total = failures + o.failures;
    double s_total = trial_seconds + o.trial_seconds;
    if (!any) {
      *this = o;
    } else if (o.any) {
      xmin = xmin.cwiseMin(o.xmin);
      xmax = xmax.cwiseMax(o.xmax);
      for (std::size_t b = 0; b < re_min.size(); ++b)
        for (int p = 0; p < 3; ++p) {
          re_min[b][p] = std::min(re_min[b][p], o.re_min[b][p]);
          re_max[b][p] = std::max(re_max[b][p], o.re_max[b][p]);
          im_min[b][p] = std::min(im_min[b][p], o.im_min[b][p]);
          im_max[b][p] = std::max(im_max[b][p], o.im_max[b][p]);
          mag_min[b][p] = std::min(mag_min[b][p], o.mag_min[b][p]);
          mag_max[b][p] = std::max(mag_max[b][p], o.mag_max[b][p]);
        }
    }
    failures = f_total;
    trial_seconds = s_total;
  }
};

Feeder sample_lines(const Feeder& f, double fraction, const StreamRng& tstream) {
  Feeder ft = f;
  for (auto& b : ft.branches) {
    StreamRng bs = tstream.stream("line").stream(b.id);
    double sr = bs.uniform(1.0 - fraction, 1.0 + fraction);
    double sx = bs.uniform(1.0 - fraction, 1.0 + fraction);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        b.r[i][j] = Interval(b.r[i][j].mid() * sr);
        b.x[i][j] = Interval(b.x[i][j].mid() * sx);
      }
  }
  return ft;
}

}  // namespace

McEnvelope mc_envelope(const Feeder& f, const McOptions& opt) {
  if (opt.trials < 1) throw std::invalid_argument("trials must be >= 1");
  auto t_start = std::chrono::steady_clock::now();

  // Structural observability is trial-independent; check it once up front on
  // a noiseless synthesis instead of per trial.
  {
    TrueState ts0 = solve_power_flow(f, opt.pf);
    ErrorSpec es0 = opt.errors;
    es0.zero_noise = true;
    MeasurementSet ms0 =
        synthesize_measurements(f, ts0, opt.placements, es0, StreamRng(0));
    MeasurementVector z1 = build_z1(f, ms0), z2 = build_z2(f, ms0);
    std::vector<RowSpec> rows = std::move(z1.rows);
    rows.insert(rows.end(), z2.rows.begin(), z2.rows.end());
    StateIndex idx = StateIndex::build(f);
    require_observable(build_jacobian(f, idx, rows).mid_dense(), f, idx);
  }

  StreamRng root(opt.seed);
  auto run_trial = [&](int trial, Acc& acc) {
    StreamRng tstream = root.stream("mc").stream(static_cast<std::uint64_t>(trial));
    auto t0 = std::chrono::steady_clock::now();
    try {
      Feeder ftrial =
          opt.line_fraction > 0 ? sample_lines(f, opt.line_fraction, tstream) : f;
      PowerFlowOptions pf = opt.pf;
      for (const auto& dg : ftrial.dg)
        pf.dg_fraction[dg.id] = tstream.stream("dg").stream(dg.id).uniform();
      TrueState ts = solve_power_flow(ftrial, pf);
      MeasurementSet ms = synthesize_measurements(ftrial, ts, opt.placements,
                                                  opt.errors,
                                                  tstream.stream("noise"));
      IterativeOptions io;
      io.check_observability = false;
      IterativeResult r = solve_iterative_wls(ftrial, ms, io);
      if (!r.converged) throw ConvergenceError("estimator did not converge");
      acc.add({std::move(r.x), std::move(r.v_bus)});
    } catch (const Error&) {
      ++acc.failures;
    }
    acc.trial_seconds += seconds_since(t0);
  };

  std::vector<Acc> parts;
  int threads = std::max(1, opt.threads);
  if (threads == 1) {
    parts.resize(1);
    for (int t = 0; t < opt.trials; ++t) run_trial(t, parts[0]);
  } else {
    parts.resize(static_cast<std::size_t>(threads));
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&, w] {
        for (int t = w; t < opt.trials; t += threads) run_trial(t, parts[w]);
      });
    for (auto& th : pool) th.join();
  }
  Acc acc;
  for (auto& p : parts) acc.merge(p);

  if (!acc.any)
    throw ConvergenceError("all " + std::to_string(opt.trials) +
                           " trials failed");

  McEnvelope env;
  env.trials = opt.trials;
  env.failures = acc.failures;
  env.seed = opt.seed;
  env.states = IntervalVector(static_cast<std::size_t>(acc.xmin.size()));
  for (Eigen::Index i = 0; i < acc.xmin.size(); ++i)
    env.states[static_cast<std::size_t>(i)] = Interval(acc.xmin[i], acc.xmax[i]);
  env.v.resize(acc.re_min.size());
  env.v_mag.resize(acc.re_min.size());
  for (std::size_t b = 0; b < acc.re_min.size(); ++b)
    for (Phase ph : f.buses[b].phases.list()) {
      int p = static_cast<int>(ph);
      env.v[b][p] = {Interval(acc.re_min[b][p], acc.re_max[b][p]),
                     Interval(acc.im_min[b][p], acc.im_max[b][p]), true};
      env.v_mag[b][p] = Interval(acc.mag_min[b][p], acc.mag_max[b][p]);
    }
  env.total_seconds = seconds_since(t_start);
  env.mean_trial_seconds = acc.trial_seconds / opt.trials;
  return env;
}

double q1(const IntervalVector& x) {
  if (x.size() == 0) throw std::invalid_argument("q1 of empty vector");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i].width();
  return s / static_cast<double>(x.size());
}

double q2(const IntervalVector& x, const Vec& truth) {
  if (x.size() != static_cast<std::size_t>(truth.size()))
    throw std::invalid_argument("q2 dimension mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double t = truth[static_cast<Eigen::Index>(i)];
    m = std::max(m, std::max(std::fabs(x[i].hi() - t), std::fabs(t - x[i].lo())));
  }
  return m;
}

IntervalVector flatten_magnitudes(
    const Feeder& f, const std::vector<std::array<VoltageBox, 3>>& v) {
  IntervalVector out;
  for (std::size_t b = 0; b < f.buses.size(); ++b)
    for (Phase ph : f.buses[b].phases.list())
      out.push_back(box_magnitude(v[b][static_cast<int>(ph)]));
  return out;
}

Vec flatten_truth_magnitudes(const Feeder& f, const TrueState& ts) {
  std::vector<double> out;
  for (std::size_t b = 0; b < f.buses.size(); ++b)
    for (Phase ph : f.buses[b].phases.list())
      out.push_back(std::abs(ts.v_bus[b][static_cast<int>(ph)]));
  return Eigen::Map<Vec>(out.data(), static_cast<Eigen::Index>(out.size()));
}

Vec flatten_truth_states(const Feeder& f, const StateIndex& idx,
                         const TrueState& ts) {
  Vec x(static_cast<Eigen::Index>(idx.n()));
  std::size_t slack = f.slack_index();
  for (Phase ph : idx.slack_phases()) {
    cd v = ts.v_bus[slack][static_cast<int>(ph)];
    x[static_cast<Eigen::Index>(idx.slack_re(ph))] = v.real();
    x[static_cast<Eigen::Index>(idx.slack_im(ph))] = v.imag();
  }
  for (const auto& [bi, ph] : idx.branch_phases()) {
    cd i = ts.i_branch[bi][static_cast<int>(ph)];
    x[static_cast<Eigen::Index>(idx.branch_re(bi, ph))] = i.real();
    x[static_cast<Eigen::Index>(idx.branch_im(bi, ph))] = i.imag();
  }
  return x;
}

namespace {

bool contains_sl(const Interval& a, double v) {
  return a.lo() - kContainSlack <= v && v <= a.hi() + kContainSlack;
}

bool contains_sl(const Interval& a, const Interval& b) {
  return a.lo() - kContainSlack <= b.lo() && b.hi() <= a.hi() + kContainSlack;
}

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

MethodRow evaluate_method(const Feeder& f, const IseSystem& sys,
                          const SolverReport& rep, const TrueState& truth,
                          const McEnvelope* mc) {
  MethodRow row;
  row.method = rep.method;
  row.iterations = rep.iterations;
  row.time_initial = rep.time_initial;
  row.time_iterate = rep.time_iterate;
  row.time_total = rep.time_initial + rep.time_iterate;

  // Envelope rows arrive already in state coordinates; solver rows carry the
  // full augmented vector.
  IntervalVector x = rep.solution.size() == sys.n
                         ? rep.solution
                         : extract_states(sys, rep.solution);
  auto v = states_to_bus_voltages(f, sys.index, x);
  IntervalVector mags = flatten_magnitudes(f, v);
  Vec tmag = flatten_truth_magnitudes(f, truth);
  row.q1_mag = q1(mags);
  row.q2_mag = q2(mags, tmag);

  double v_base = f.base_kv * 1000.0 / std::sqrt(3.0);
  row.contains_truth = true;
  for (std::size_t b = 0; b < f.buses.size(); ++b)
    for (Phase ph : f.buses[b].phases.list()) {
      int p = static_cast<int>(ph);
      const VoltageBox& box = v[b][p];
      row.width_sum_re[p] += box.re.width() * v_base;
      row.width_sum_im[p] += box.im.width() * v_base;
      cd tv = truth.v_bus[b][p];
      if (!contains_sl(box.re, tv.real()) || !contains_sl(box.im, tv.imag()) ||
          !contains_sl(box_magnitude(box), std::abs(tv)))
        row.contains_truth = false;
    }

  if (mc) {
    // Verdict is at the voltage-magnitude level: trial noise re-centers each
    // draw, so raw states backed by a single dominant channel may step
    // outside the case box without invalidating the magnitude bounds.
    row.contains_mc = true;
    for (std::size_t b = 0; b < f.buses.size(); ++b)
      for (Phase ph : f.buses[b].phases.list()) {
        int p = static_cast<int>(ph);
        if (!contains_sl(box_magnitude(v[b][p]), mc->v_mag[b][p]))
          row.contains_mc = false;
      }
  }
  return row;
}

std::string comparison_csv(const std::vector<MethodRow>& rows) {
  std::ostringstream os;
  os << "method,q1_mag_pu,q2_mag_pu,width_re_A_V,width_re_B_V,width_re_C_V,"
        "width_im_A_V,width_im_B_V,width_im_C_V,iterations,contains_truth,"
        "contains_mc\n";
  for (const auto& r : rows) {
    os << r.method << ',' << fmt_g(r.q1_mag) << ',' << fmt_g(r.q2_mag);
    for (int p = 0; p < 3; ++p) os << ',' << fmt_g(r.width_sum_re[p]);
    for (int p = 0; p < 3; ++p) os << ',' << fmt_g(r.width_sum_im[p]);
    os << ',' << r.iterations << ',' << (r.contains_truth ? "yes" : "no") << ','
       << (r.contains_mc ? "yes" : "no") << "\n";
  }
  return os.str();
}

std::string report_csv(const Feeder& f,
                       const std::vector<std::array<VoltageBox, 3>>& v,
                       const TrueState& truth, const McEnvelope* mc) {
  std::ostringstream os;
  os << "bus,phase,lo,hi,truth,mc_min,mc_max\n";
  for (std::size_t b = 0; b < f.buses.size(); ++b)
    for (Phase ph : f.buses[b].phases.list()) {
      int p = static_cast<int>(ph);
      Interval m = box_magnitude(v[b][p]);
      os << f.buses[b].id << ',' << phase_letter(ph) << ',' << fmt_g(m.lo())
         << ',' << fmt_g(m.hi()) << ','
         << fmt_g(std::abs(truth.v_bus[b][p]));
      if (mc)
        os << ',' << fmt_g(mc->v_mag[b][p].lo()) << ','
           << fmt_g(mc->v_mag[b][p].hi());
      else
        os << ",,";
      os << "\n";
    }
  return os.str();
}

}  // namespace ise

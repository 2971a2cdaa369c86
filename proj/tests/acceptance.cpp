// Acceptance gate: ten end-to-end criteria, one verdict line each.
// Exits nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ise/analysis.hpp"
#include "ise/casework.hpp"
#include "ise/errors.hpp"

using namespace ise;

namespace {

// Pinned tolerances.
constexpr double kHullSlack = 1e-9;        // criterion 2
constexpr double kOrderSlack = 1e-12;      // criterion 3
constexpr double kThinRel = 1e-6;          // criterion 4
constexpr double kZeroNoisePu = 1e-6;      // criterion 4
constexpr double kMetricLo = 0.005;        // criterion 5
constexpr double kMetricHi = 0.06;         // criterion 5
constexpr double kNestSlack = 1e-12;       // criterion 6
constexpr double kRobustFactor = 2.0;      // criterion 7
constexpr double kSpeedupFloor = 50.0;     // criterion 8
constexpr double kSoundnessBudget = 10.0;  // seconds, criterion 1
constexpr double kHullBudget = 60.0;       // seconds, criterion 2
constexpr double kCase1Budget = 300.0;     // seconds, criterion 5

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Feeder load_feeder_file(const std::string& name) {
  return parse_feeder(slurp(std::string(ISE_DATA_DIR) + "/feeders/" + name),
                      name);
}

std::filesystem::path case_path(const std::string& name) {
  return std::filesystem::path(ISE_DATA_DIR) / "cases" / name;
}

struct Verdict {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
  void note(const std::string& s) {
    if (!detail.empty()) detail += "; ";
    detail += s;
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------- 1

Interval random_interval(std::mt19937_64& g, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  double a = u(g), b = u(g);
  return Interval(std::min(a, b), std::max(a, b));
}

double point_in(const Interval& x, std::mt19937_64& g) {
  std::uniform_real_distribution<double> t(0.0, 1.0);
  return x.lo() + t(g) * (x.hi() - x.lo());
}

Interval shrink(const Interval& x, std::mt19937_64& g) {
  std::uniform_real_distribution<double> t(0.0, 1.0);
  double a = point_in(x, g), b = point_in(x, g);
  Interval s(std::min(a, b), std::max(a, b));
  (void)t;
  return s;
}

Verdict criterion1() {
  Verdict v;
  auto t0 = Clock::now();
  std::mt19937_64 g(20240901);
  long checks = 0, violations = 0;

  // Point containment and inclusion isotonicity across the operation set.
  for (int iter = 0; iter < 100000; ++iter) {
    double scale = (iter % 3 == 0) ? 1e6 : 2.0;
    Interval x = random_interval(g, scale);
    Interval y = random_interval(g, scale);
    Interval xs = shrink(x, g), ys = shrink(y, g);
    double px = point_in(xs, g), py = point_in(ys, g);

    auto both = [&](const Interval& full, const Interval& sub, double pt) {
      ++checks;
      if (!full.contains(pt)) ++violations;
      ++checks;
      if (!full.contains(sub)) ++violations;
    };

    both(x + y, xs + ys, px + py);
    both(x - y, xs - ys, px - py);
    both(x * y, xs * ys, px * py);
    if (!y.contains(0.0)) both(x / y, xs / ys, px / py);
    both(square(x), square(xs), px * px);
    if (x.lo() >= 0.0) both(sqrt(x), sqrt(xs), std::sqrt(px));
    if (scale <= 10.0) {
      both(cos(x), cos(xs), std::cos(px));
      both(sin(x), sin(xs), std::sin(px));
    }
  }
  if (checks < 100000) v.fail("too few checks");
  if (violations != 0)
    v.fail(std::to_string(violations) + " containment violations");

  // x (y + z) subset of x y + x z, modulo the outward-rounding padding of
  // each evaluation (a few ulps per endpoint).
  auto ulps = [](double val) {
    return 4.0 * std::ldexp(std::max(std::abs(val), 1e-300), -52);
  };
  long sub_bad = 0;
  for (int iter = 0; iter < 10000; ++iter) {
    Interval x = random_interval(g, 3.0);
    Interval y = random_interval(g, 3.0);
    Interval z = random_interval(g, 3.0);
    Interval left = x * (y + z);
    Interval right = x * y + x * z;
    if (left.lo() < right.lo() - ulps(right.lo()) ||
        left.hi() > right.hi() + ulps(right.hi()))
      ++sub_bad;
  }
  if (sub_bad != 0)
    v.fail(std::to_string(sub_bad) + " sub-distributivity violations");

  double dt = seconds_since(t0);
  if (dt >= kSoundnessBudget) v.fail("runtime " + fmt(dt) + " s over budget");
  v.note(std::to_string(checks) + " containment checks, " + fmt(dt) + " s");
  return v;
}

// ------------------------------------------------------------- 2 and 3

struct SampleSystem {
  IntervalMatrix a;
  IntervalVector b;
  IntervalVector hull;
};

// Random square systems accepted only inside every method's documented
// domain: contraction bound under 0.9 and an elimination run that does not
// break down (wide-pivot systems are exercised separately in unit tests).
std::vector<SampleSystem> sample_systems(std::mt19937_64& g, int count) {
  std::vector<SampleSystem> out;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> rw(0.01, 0.12);
  while (static_cast<int>(out.size()) < count) {
    std::size_t n = 2 + out.size() % 5;
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    SampleSystem s;
    s.a = IntervalMatrix(n, n);
    s.b = IntervalVector(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double mid = (i == j) ? 1.5 * static_cast<double>(n) + u(g) : u(g);
        s.a.set_entry(i, j, Interval(mid));
      }
      s.b[i] = Interval(u(g));
    }
    std::uniform_int_distribution<int> nwide(4, 12);
    int wide = nwide(g);
    for (int k = 0; k < wide; ++k) {
      double r = rw(g);
      if (k % 3 == 2) {
        std::size_t i = pick(g);
        Interval e = s.b[i];
        s.b[i] = Interval(e.lo() - r, e.hi() + r);
      } else {
        std::size_t i = pick(g), j = pick(g);
        Interval e = s.a.entry(i, j);
        s.a.set_entry(i, j, Interval(e.lo() - r, e.hi() + r));
      }
    }
    try {
      if (precondition(s.a, s.b).beta >= 0.9) continue;
      s.hull = ige_solve(s.a, s.b);  // reject elimination breakdowns
      s.hull = hull_oracle(s.a, s.b);
    } catch (const Error&) {
      continue;
    } catch (const std::invalid_argument&) {
      continue;
    }
    out.push_back(std::move(s));
  }
  return out;
}

bool contains_with_slack(const IntervalVector& outer,
                         const IntervalVector& inner, double slack) {
  for (std::size_t i = 0; i < outer.size(); ++i) {
    if (inner[i].lo() < outer[i].lo() - slack) return false;
    if (inner[i].hi() > outer[i].hi() + slack) return false;
  }
  return true;
}

void criterion23(Verdict& v2, Verdict& v3) {
  auto t0 = Clock::now();
  std::mt19937_64 g(7071);
  std::vector<SampleSystem> systems = sample_systems(g, 200);

  SolverOptions stationary;
  stationary.eps = 1e-14;
  stationary.max_iterations = 5000;

  int hull_bad = 0, order_bad = 0;
  for (const SampleSystem& s : systems) {
    SolverReport mk = mko_solve(s.a, s.b, stationary);
    SolverReport kr = krawczyk_solve(s.a, s.b, stationary);
    SolverReport ik = iko_solve(s.a, s.b, stationary);
    IntervalVector ge = ige_solve(s.a, s.b);

    if (!contains_with_slack(mk.solution, s.hull, kHullSlack)) ++hull_bad;
    if (!contains_with_slack(kr.solution, s.hull, kHullSlack)) ++hull_bad;
    if (!contains_with_slack(ik.solution, s.hull, kHullSlack)) ++hull_bad;
    if (!contains_with_slack(ge, s.hull, kHullSlack)) ++hull_bad;

    IntervalVector x0 = initial_box(precondition(s.a, s.b));
    for (std::size_t i = 0; i < s.hull.size(); ++i) {
      double wm = mk.solution[i].width();
      double wk = kr.solution[i].width();
      double wi = ik.solution[i].width();
      double w0 = x0[i].width();
      if (wm > wk + kOrderSlack || wk > w0 + kOrderSlack ||
          wm > wi + kOrderSlack)
        ++order_bad;
    }
  }

  if (hull_bad != 0)
    v2.fail(std::to_string(hull_bad) + " hull containment violations");
  double dt = seconds_since(t0);
  if (dt >= kHullBudget) v2.fail("runtime " + fmt(dt) + " s over budget");
  v2.note("200 systems, 4 methods, " + fmt(dt) + " s");

  if (order_bad != 0)
    v3.fail(std::to_string(order_bad) + " width-ordering violations");
  v3.note("orderings mko<=krawczyk<=initial and mko<=iko, componentwise");
}

// ---------------------------------------------------------------- 4

IntervalMatrix thin_matrix(const IntervalMatrix& a) {
  IntervalMatrix t(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (const auto& e : a.row(i)) t.set_entry(i, e.col, Interval(e.value.mid()));
  return t;
}

IntervalVector thin_vector(const IntervalVector& b) {
  IntervalVector t(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) t[i] = Interval(b[i].mid());
  return t;
}

Verdict criterion4() {
  Verdict v;
  std::mt19937_64 g(404);
  std::uniform_int_distribution<int> coin(0, 1);

  struct Stock {
    Feeder feeder;
    std::vector<std::string> pmu_buses;
    std::vector<std::string> flow_branches;
  };
  std::vector<Stock> stock;
  stock.push_back({load_feeder_file("toy2.json"), {"1", "2"}, {"1-2"}});
  stock.push_back({load_feeder_file("toy3.json"), {"1", "2", "3"}, {"1-2", "2-3"}});
  stock.push_back({load_feeder_file("ieee13.json"),
                   {"650", "671", "675", "634"},
                   {"632-633", "645-646", "684-652", "671-680"}});

  int done = 0, wls_bad = 0;
  double worst_rel = 0.0;
  std::uint64_t seed = 1;
  while (done < 50) {
    const Stock& st = stock[static_cast<std::size_t>(done) % stock.size()];
    Placements pl;
    pl.pmu_voltage = {st.feeder.slack};  // anchor, always present
    for (const auto& id : st.pmu_buses)
      if (coin(g)) pl.pmu_voltage.push_back(id);
    for (const auto& id : st.flow_branches)
      if (coin(g)) pl.scada_flow.push_back(id);

    TrueState ts = solve_power_flow(st.feeder);
    ErrorSpec es;
    es.truncated = true;
    MeasurementSet ms =
        synthesize_measurements(st.feeder, ts, pl, es, StreamRng(seed++));
    IseSystem sys;
    try {
      sys = assemble(st.feeder, ms, Variant::II);
    } catch (const ObservabilityError&) {
      continue;
    }
    ++done;

    IntervalMatrix ta = thin_matrix(sys.A);
    IntervalVector tb = thin_vector(sys.B);
    SolverReport rep = mko_solve(ta, tb);

    Mat h = build_jacobian(st.feeder, sys.index, sys.rows).mid_dense();
    Vec z(static_cast<Eigen::Index>(sys.m()));
    for (std::size_t i = 0; i < sys.m(); ++i)
      z[static_cast<Eigen::Index>(i)] = sys.B[i].mid();
    Vec x = solve_linear_wls(h, z, sys.weights, st.feeder, sys.index);

    for (std::size_t i = 0; i < sys.n; ++i) {
      double got = rep.solution[i].mid();
      double ref = x[static_cast<Eigen::Index>(i)];
      double rel = std::abs(got - ref) / std::max(1.0, std::abs(ref));
      worst_rel = std::max(worst_rel, rel);
      if (rel > kThinRel) ++wls_bad;
    }
  }
  if (wls_bad != 0)
    v.fail(std::to_string(wls_bad) + " thin-system mismatches vs direct wls");

  // Zero noise: the refined point estimate lands on the operating point.
  double worst_pu = 0.0;
  for (const Stock& st : stock) {
    Placements pl;
    pl.pmu_voltage = {st.feeder.slack};
    pl.scada_flow = st.flow_branches;
    TrueState ts = solve_power_flow(st.feeder);
    ErrorSpec es;
    es.zero_noise = true;
    MeasurementSet ms =
        synthesize_measurements(st.feeder, ts, pl, es, StreamRng(1));
    IterativeOptions opt;
    opt.tol = 1e-10;
    IterativeResult res = solve_iterative_wls(st.feeder, ms, opt);
    if (!res.converged) v.fail(st.feeder.name + ": no convergence");

    StateIndex idx = StateIndex::build(st.feeder);
    for (Phase p : idx.slack_phases()) {
      cd s0 = slack_phasor(st.feeder, p);
      worst_pu = std::max(worst_pu,
                          std::abs(res.x[idx.slack_re(p)] - s0.real()));
      worst_pu = std::max(worst_pu,
                          std::abs(res.x[idx.slack_im(p)] - s0.imag()));
    }
    for (auto [bi, ph] : idx.branch_phases()) {
      cd it = ts.i_branch[bi][static_cast<int>(ph)];
      worst_pu = std::max(worst_pu,
                          std::abs(res.x[idx.branch_re(bi, ph)] - it.real()));
      worst_pu = std::max(worst_pu,
                          std::abs(res.x[idx.branch_im(bi, ph)] - it.imag()));
    }
  }
  if (worst_pu > kZeroNoisePu)
    v.fail("zero-noise deviation " + fmt(worst_pu) + " pu");
  v.note("50 assemblies, worst thin-rel " + fmt(worst_rel) +
         ", worst zero-noise " + fmt(worst_pu) + " pu");
  return v;
}

// ---------------------------------------------------------------- 5

Verdict criterion5() {
  Verdict v;
  auto t0 = Clock::now();
  CaseConfig cfg = load_case(case_path("case1.json"));
  CaseResult res = run_case(cfg);
  if (!res.failures.empty()) v.fail("solver failure in case1");
  if (!res.mc) {
    v.fail("no envelope");
    return v;
  }

  const SolverReport* mko = nullptr;
  for (const auto& r : res.reports)
    if (r.method == "mko") mko = &r;
  if (!mko) {
    v.fail("no mko report");
    return v;
  }

  IntervalVector x = extract_states(res.system, mko->solution);
  auto v_box = states_to_bus_voltages(res.feeder, res.system.index, x);
  int out_truth = 0, out_mc = 0;
  for (std::size_t b = 0; b < res.feeder.buses.size(); ++b)
    for (Phase ph : res.feeder.buses[b].phases.list()) {
      int p = static_cast<int>(ph);
      Interval mag = box_magnitude(v_box[b][p]);
      double truth = std::abs(res.truth.v_bus[b][p]);
      if (truth < mag.lo() - kContainSlack || truth > mag.hi() + kContainSlack)
        ++out_truth;
      const Interval& env = res.mc->v_mag[b][p];
      if (env.lo() < mag.lo() - kContainSlack ||
          env.hi() > mag.hi() + kContainSlack)
        ++out_mc;
    }
  if (out_truth != 0)
    v.fail(std::to_string(out_truth) + " bus phases missing truth");
  if (out_mc != 0)
    v.fail(std::to_string(out_mc) + " bus phases missing the envelope");

  IntervalVector mags = flatten_magnitudes(res.feeder, v_box);
  Vec tm = flatten_truth_magnitudes(res.feeder, res.truth);
  double m1 = q1(mags), m2 = q2(mags, tm);
  if (m1 < kMetricLo || m1 > kMetricHi) v.fail("q1 " + fmt(m1) + " outside band");
  if (m2 < kMetricLo || m2 > kMetricHi) v.fail("q2 " + fmt(m2) + " outside band");

  double dt = seconds_since(t0);
  if (dt >= kCase1Budget) v.fail("runtime " + fmt(dt) + " s over budget");
  v.note("q1 " + fmt(m1) + ", q2 " + fmt(m2) + ", trials " +
         std::to_string(res.mc->trials) + ", " + fmt(dt) + " s");
  return v;
}

// ---------------------------------------------------------------- 6

Verdict criterion6() {
  Verdict v;
  CaseConfig base = load_case(case_path("case2.json"));
  base.solvers = {"mko", "mc"};

  CaseConfig flat = base;
  flat.line_fraction = 0.0;
  flat.solvers = {"mko"};
  flat.trials = 0;

  CaseResult r0 = run_case(flat);
  CaseResult r5 = run_case(base);
  if (!r0.failures.empty() || !r5.failures.empty()) v.fail("solver failure");

  IntervalVector x0 = extract_states(r0.system, r0.reports[0].solution);
  IntervalVector x5 = extract_states(r5.system, r5.reports[0].solution);
  int shrunk = 0;
  for (std::size_t i = 0; i < x0.size(); ++i) {
    if (x0[i].lo() < x5[i].lo() - kNestSlack ||
        x0[i].hi() > x5[i].hi() + kNestSlack)
      ++shrunk;
  }
  if (shrunk != 0)
    v.fail(std::to_string(shrunk) + " states shrank under line uncertainty");

  const MethodRow& row = r5.rows[0];
  if (!row.contains_truth) v.fail("truth left the widened box");
  if (!row.contains_mc) v.fail("envelope left the widened box");
  v.note("q1 " + fmt(r0.rows[0].q1_mag) + " -> " + fmt(row.q1_mag) +
         " under fraction 0.05");
  return v;
}

// ---------------------------------------------------------------- 7

Verdict criterion7() {
  Verdict v;
  CaseConfig centered = load_case(case_path("case3.json"));
  centered.dg_truth_fraction.clear();
  centered.default_dg_fraction = 0.5;
  CaseResult rc = run_case(centered);
  if (!rc.rows[0].contains_truth) v.fail("centered truth not contained");
  double q2c = rc.rows[0].q2_mag;

  for (const char* name : {"case3.json", "case4.json", "case5.json"}) {
    CaseConfig cfg = load_case(case_path(name));
    CaseResult res = run_case(cfg);
    const MethodRow& row = res.rows[0];
    if (!row.contains_truth)
      v.fail(std::string(name) + ": truth not contained");
    double ratio = row.q2_mag / q2c;
    if (!(ratio < kRobustFactor && ratio > 1.0 / kRobustFactor))
      v.fail(std::string(name) + ": q2 ratio " + fmt(ratio));
    v.note(std::string(name) + " q2 " + fmt(row.q2_mag));
  }
  v.note("centered q2 " + fmt(q2c));
  return v;
}

// ---------------------------------------------------------------- 8

Verdict criterion8() {
  Verdict v;
  CaseConfig cfg = load_case(case_path("case3.json"));

  Feeder nominal = load_feeder_file("ieee123.json");
  Feeder wide = apply_line_uncertainty(nominal, cfg.line_fraction);
  PowerFlowOptions pf;
  for (const auto& dg : wide.dg) pf.dg_fraction[dg.id] = 0.5;
  TrueState ts = solve_power_flow(wide, pf);
  MeasurementSet ms = synthesize_measurements(wide, ts, cfg.placements,
                                              cfg.errors, StreamRng(cfg.seed));
  IseSystem sys = assemble(wide, ms, Variant::IV);

  // Best of two solves; the first run also warms the caches.
  double t_mko = 1e9;
  SolverReport rep;
  for (int k = 0; k < 2; ++k) {
    auto t0 = Clock::now();
    rep = mko_solve(sys.A, sys.B, cfg.solver);
    t_mko = std::min(t_mko, seconds_since(t0));
  }

  McOptions mo;
  mo.trials = 1000;
  mo.seed = cfg.seed;
  mo.line_fraction = cfg.line_fraction;
  mo.threads = 1;
  mo.errors = cfg.errors;
  mo.placements = cfg.placements;
  auto t1 = Clock::now();
  McEnvelope env = mc_envelope(nominal, mo);
  double t_mc = seconds_since(t1);

  double ratio = t_mc / t_mko;
  if (ratio < kSpeedupFloor)
    v.fail("speedup " + fmt(ratio) + " below " + fmt(kSpeedupFloor));
  if (env.trials != 1000) v.fail("envelope ran short");

  // Iteration ordering on the thin variant, where elimination still works.
  TrueState ts2 = solve_power_flow(nominal, pf);
  MeasurementSet ms2 = synthesize_measurements(
      nominal, ts2, cfg.placements, cfg.errors, StreamRng(cfg.seed));
  IseSystem thin = assemble(nominal, ms2, Variant::II);
  SolverReport mk = mko_solve(thin.A, thin.B, cfg.solver);
  SolverReport ik = iko_solve(thin.A, thin.B, cfg.solver);
  if (mk.iterations > ik.iterations)
    v.fail("mko took " + std::to_string(mk.iterations) + " > iko " +
           std::to_string(ik.iterations) + " iterations");

  v.note("mko " + fmt(t_mko) + " s, mc(1000) " + fmt(t_mc) + " s, speedup " +
         fmt(ratio) + "; iterations mko " + std::to_string(mk.iterations) +
         " vs iko " + std::to_string(ik.iterations));
  return v;
}

// ---------------------------------------------------------------- 9

Verdict criterion9() {
  Verdict v;
  Feeder f = load_feeder_file("ieee123.json");
  CaseConfig cfg = load_case(case_path("case3.json"));

  DimensionReport d = audit_dimensions(f, cfg.placements);
  std::string text = dimension_text(f, cfg.placements);

  for (const char* ref : {"714", "888", "1602", "238", "296", "534"})
    if (text.find(ref) == std::string::npos)
      v.fail(std::string("reference figure ") + ref + " missing from audit");
  for (std::size_t val : {d.n, d.m(), d.total()})
    if (text.find(std::to_string(val)) == std::string::npos)
      v.fail("conversion figure " + std::to_string(val) + " missing");
  if (d.total() == 1602) {
    // Exact match to the reference would demand identical phase padding.
    v.note("conversion matches the reference dimensions exactly");
  } else if (text.find("phase-masked") == std::string::npos) {
    v.fail("audit does not explain the dimension delta");
  }

  // The single-phase reduction runs one third of the padded state size.
  DimensionReport db = audit_dimensions(balanced_equivalent(f), cfg.placements);
  if (db.n != 238)
    v.fail("balanced n " + std::to_string(db.n) + " != 238");
  v.note("n=" + std::to_string(d.n) + " m=" + std::to_string(d.m()) +
         " m+n=" + std::to_string(d.total()) + ", balanced m+n=" +
         std::to_string(db.total()));
  return v;
}

// ---------------------------------------------------------------- 10

Verdict criterion10() {
  Verdict v;
  Feeder f = load_feeder_file("ieee13.json");
  CaseConfig cfg = load_case(case_path("case1.json"));

  // All DG metered: the band-free permissive assembly equals model iii.
  Feeder metered = f;
  for (auto& dg : metered.dg) dg.metered = true;
  TrueState ts1 = solve_power_flow(metered);
  MeasurementSet ms1 = synthesize_measurements(
      metered, ts1, cfg.placements, cfg.errors, StreamRng(cfg.seed));
  if (dump_system(assemble(metered, ms1, Variant::IV)) !=
      dump_system(assemble(metered, ms1, Variant::III)))
    v.fail("model iv (all metered) differs from model iii");

  // Zero line fraction: the permissive assembly equals model ii.
  TrueState ts2 = solve_power_flow(f);
  MeasurementSet ms2 = synthesize_measurements(f, ts2, cfg.placements,
                                               cfg.errors, StreamRng(cfg.seed));
  if (dump_system(assemble(f, ms2, Variant::IV)) !=
      dump_system(assemble(f, ms2, Variant::II)))
    v.fail("model iv (thin lines) differs from model ii");

  v.note("bit-identical dumps on the 13-bus assemblies");
  return v;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    Verdict verdict;
  };
  std::vector<Entry> results;

  try {
    results.push_back({1, criterion1()});
    Verdict v2, v3;
    criterion23(v2, v3);
    results.push_back({2, v2});
    results.push_back({3, v3});
    results.push_back({4, criterion4()});
    results.push_back({5, criterion5()});
    results.push_back({6, criterion6()});
    results.push_back({7, criterion7()});
    results.push_back({8, criterion8()});
    results.push_back({9, criterion9()});
    results.push_back({10, criterion10()});
  } catch (const std::exception& e) {
    std::printf("ACCEPTANCE aborted: %s\n", e.what());
    return 2;
  }

  bool all = true;
  for (const Entry& e : results) {
    all = all && e.verdict.pass;
    std::printf("ACCEPTANCE %d: %s%s%s\n", e.id,
                e.verdict.pass ? "PASS" : "FAIL",
                e.verdict.detail.empty() ? "" : " - ",
                e.verdict.detail.c_str());
  }
  return all ? 0 : 1;
}

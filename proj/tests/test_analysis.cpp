#include <algorithm>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "ise/analysis.hpp"
#include "ise/rng.hpp"

using namespace ise;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Feeder load(const std::string& name) {
  return parse_feeder(slurp(std::string(ISE_DATA_DIR) + "/feeders/" + name),
                      name);
}

Placements toy3_placements() {
  Placements pl;
  pl.pmu_voltage = {"1", "2"};
  pl.scada_flow = {"2-3"};
  return pl;
}

bool same_box(const IntervalVector& a, const IntervalVector& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].lo() != b[i].lo() || a[i].hi() != b[i].hi()) return false;
  return true;
}

}  // namespace

TEST_CASE("width and deviation metrics") {
  IntervalVector x(2);
  x[0] = Interval(0.0, 1.0);
  x[1] = Interval(2.0, 4.0);
  CHECK(q1(x) == doctest::Approx(1.5).epsilon(1e-15));

  Vec t(2);
  t << 0.5, 3.0;
  CHECK(q2(x, t) == doctest::Approx(1.0).epsilon(1e-15));

  // Thin vector centered on the truth scores zero on both.
  IntervalVector thin(2);
  thin[0] = Interval(0.5);
  thin[1] = Interval(3.0);
  CHECK(q1(thin) == 0.0);
  CHECK(q2(thin, t) == 0.0);
}

TEST_CASE("magnitude flattening follows document order") {
  Feeder f = load("toy3.json");
  TrueState ts = solve_power_flow(f);
  StateIndex idx = StateIndex::build(f);
  Vec truth = flatten_truth_states(f, idx, ts);
  auto v = states_to_bus_voltages(f, idx, IntervalVector::thin(truth));
  IntervalVector mags = flatten_magnitudes(f, v);
  Vec tm = flatten_truth_magnitudes(f, ts);

  CHECK(mags.size() == 7);  // 3 + 3 + 1 present phases
  CHECK(tm.size() == 7);
  for (std::size_t i = 0; i < mags.size(); ++i)
    CHECK(std::abs(mags[i].mid() - tm[static_cast<Eigen::Index>(i)]) < 1e-9);
  // First entries are the slack phases, magnitude one.
  CHECK(tm[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(tm[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(tm[2] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("single-trial envelope is the trial itself") {
  Feeder f = load("toy3.json");
  McOptions opt;
  opt.trials = 1;
  opt.seed = 5;
  opt.placements = toy3_placements();
  McEnvelope env = mc_envelope(f, opt);
  CHECK(env.trials == 1);
  CHECK(env.failures == 0);
  CHECK(env.states.max_width() == 0.0);
  for (std::size_t b = 0; b < f.buses.size(); ++b)
    for (Phase ph : f.buses[b].phases.list())
      CHECK(env.v_mag[b][static_cast<int>(ph)].width() == 0.0);
}

TEST_CASE("identical trials collapse the envelope") {
  // No noise, no dg, no line sampling: every trial is the same run.
  Feeder f = load("toy2.json");
  McOptions opt;
  opt.trials = 8;
  opt.seed = 2;
  opt.errors.zero_noise = true;
  opt.placements.pmu_voltage = {"1"};
  McEnvelope env = mc_envelope(f, opt);
  CHECK(env.trials == 8);
  CHECK(env.states.max_width() < 1e-15);
}

TEST_CASE("envelopes are nested in the trial count") {
  Feeder f = load("toy3.json");
  McOptions opt;
  opt.seed = 4;
  opt.placements = toy3_placements();
  opt.errors.truncated = true;

  opt.trials = 60;
  McEnvelope small = mc_envelope(f, opt);
  opt.trials = 180;
  McEnvelope big = mc_envelope(f, opt);

  REQUIRE(small.states.size() == big.states.size());
  CHECK(big.states.contains(small.states));
  for (std::size_t b = 0; b < f.buses.size(); ++b)
    for (Phase ph : f.buses[b].phases.list()) {
      int p = static_cast<int>(ph);
      CHECK(big.v_mag[b][p].contains(small.v_mag[b][p]));
    }
  // More trials only widen the spread.
  CHECK(q1(big.states) >= q1(small.states));
}

TEST_CASE("thread count never changes the envelope") {
  Feeder f = load("toy3.json");
  McOptions opt;
  opt.trials = 64;
  opt.seed = 9;
  opt.placements = toy3_placements();
  opt.errors.truncated = true;
  opt.line_fraction = 0.05;

  opt.threads = 1;
  McEnvelope serial = mc_envelope(f, opt);
  opt.threads = 4;
  McEnvelope parallel = mc_envelope(f, opt);

  CHECK(serial.trials == parallel.trials);
  CHECK(serial.failures == parallel.failures);
  CHECK(same_box(serial.states, parallel.states));
  for (std::size_t b = 0; b < f.buses.size(); ++b)
    for (Phase ph : f.buses[b].phases.list()) {
      int p = static_cast<int>(ph);
      CHECK(serial.v_mag[b][p].lo() == parallel.v_mag[b][p].lo());
      CHECK(serial.v_mag[b][p].hi() == parallel.v_mag[b][p].hi());
    }
}

TEST_CASE("method evaluation flags containment against truth") {
  Feeder f = load("toy3.json");
  TrueState ts = solve_power_flow(f);
  ErrorSpec es;
  es.truncated = true;
  MeasurementSet ms =
      synthesize_measurements(f, ts, toy3_placements(), es, StreamRng(6));
  IseSystem sys = assemble(f, ms, Variant::II);
  SolverReport rep = mko_solve(sys.A, sys.B);

  MethodRow row = evaluate_method(f, sys, rep, ts, nullptr);
  CHECK(row.method == "mko");
  CHECK(row.contains_truth);
  CHECK(row.q1_mag > 0.0);
  CHECK(row.q2_mag > 0.0);
  CHECK(row.iterations == rep.iterations);

  // A shifted "truth" falls outside the box.
  TrueState off = ts;
  for (auto& arr : off.v_bus)
    for (auto& v : arr) v *= 1.2;
  MethodRow bad = evaluate_method(f, sys, rep, off, nullptr);
  CHECK(!bad.contains_truth);

  // Against an envelope from the same generating process the box holds.
  McOptions mo;
  mo.trials = 50;
  mo.seed = 1;
  mo.placements = toy3_placements();
  mo.errors = es;
  McEnvelope env = mc_envelope(f, mo);
  MethodRow with_mc = evaluate_method(f, sys, rep, ts, &env);
  CHECK(with_mc.contains_mc);
}

TEST_CASE("csv writers emit one row per subject") {
  Feeder f = load("toy3.json");
  TrueState ts = solve_power_flow(f);
  StateIndex idx = StateIndex::build(f);
  Vec truth = flatten_truth_states(f, idx, ts);
  auto v = states_to_bus_voltages(f, idx, IntervalVector::thin(truth));

  std::string rep = report_csv(f, v, ts, nullptr);
  std::size_t lines = std::count(rep.begin(), rep.end(), '\n');
  CHECK(lines == 1 + 7);
  CHECK(rep.rfind("bus,phase,lo,hi,truth,mc_min,mc_max\n", 0) == 0);
  CHECK(rep.find(",,") != std::string::npos);  // envelope columns left empty

  MethodRow row;
  row.method = "mko";
  row.iterations = 3;
  row.contains_truth = true;
  std::string cmp = comparison_csv({row});
  CHECK(std::count(cmp.begin(), cmp.end(), '\n') == 2);
  CHECK(cmp.find("mko,") != std::string::npos);
  CHECK(cmp.find(",yes,no\n") != std::string::npos);
}

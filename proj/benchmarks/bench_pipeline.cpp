#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "ise/casework.hpp"

namespace {

using namespace ise;

std::string slurp(const char* path) {
  std::ifstream in(path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

CaseConfig feeder13_config() {
  CaseConfig cfg;
  cfg.name = "bench13";
  cfg.feeder_file = ISE_DATA_DIR "/feeders/ieee13.json";
  cfg.model = Variant::II;
  cfg.seed = 1;
  cfg.placements.pmu_voltage = {"650", "671"};
  cfg.placements.scada_flow = {"632-633", "645-646", "684-652"};
  cfg.errors.truncated = true;
  cfg.solvers = {"mko"};
  return cfg;
}

// Truth, synthesis, assembly, solve, metrics; no reports, no trials.
void BM_Pipeline13(benchmark::State& state) {
  CaseConfig cfg = feeder13_config();
  for (auto _ : state) benchmark::DoNotOptimize(run_case(cfg));
}
BENCHMARK(BM_Pipeline13)->Unit(benchmark::kMillisecond);

const Feeder& feeder123() {
  static const Feeder f = parse_feeder(
      slurp(ISE_DATA_DIR "/feeders/ieee123.json"), "ieee123.json");
  return f;
}

void BM_Assemble123(benchmark::State& state) {
  const Feeder& f = feeder123();
  TrueState ts = solve_power_flow(f);
  Placements pl;
  pl.pmu_voltage = {"149", "8", "25", "54", "97", "108"};
  pl.scada_flow = {"1-7", "9-14", "15-16", "13-52", "18-35", "44-45",
                   "57-60", "76-77", "86-87", "99-100", "110-112"};
  ErrorSpec es;
  MeasurementSet ms = synthesize_measurements(f, ts, pl, es, StreamRng(1));
  for (auto _ : state)
    benchmark::DoNotOptimize(assemble(f, ms, Variant::II));
}
BENCHMARK(BM_Assemble123)->Unit(benchmark::kMillisecond);

// Dim 1056 augmented system.
void BM_Mko123(benchmark::State& state) {
  const Feeder& f = feeder123();
  TrueState ts = solve_power_flow(f);
  Placements pl;
  pl.pmu_voltage = {"149", "8", "25", "54", "97", "108"};
  pl.scada_flow = {"1-7", "9-14", "15-16", "13-52", "18-35", "44-45",
                   "57-60", "76-77", "86-87", "99-100", "110-112"};
  ErrorSpec es;
  MeasurementSet ms = synthesize_measurements(f, ts, pl, es, StreamRng(1));
  IseSystem sys = assemble(f, ms, Variant::II);
  for (auto _ : state) benchmark::DoNotOptimize(mko_solve(sys.A, sys.B));
}
BENCHMARK(BM_Mko123)->Unit(benchmark::kMillisecond);

void BM_PowerFlow123(benchmark::State& state) {
  const Feeder& f = feeder123();
  for (auto _ : state) benchmark::DoNotOptimize(solve_power_flow(f));
}
BENCHMARK(BM_PowerFlow123)->Unit(benchmark::kMillisecond);

}  // namespace

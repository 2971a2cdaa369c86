#include <benchmark/benchmark.h>

#include <random>

#include "ise/feeder.hpp"
#include "ise/ise_system.hpp"
#include "ise/measurements.hpp"
#include "ise/power_flow.hpp"
#include "ise/rng.hpp"
#include "ise/solvers.hpp"

#include <fstream>
#include <sstream>

namespace {

using namespace ise;

// Diagonally dominant midpoint so preconditioning always succeeds.
IntervalMatrix random_matrix(std::size_t n, double rad, std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  IntervalMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double mid = (i == j) ? static_cast<double>(n) + u(g) : u(g);
      a.set_entry(i, j, Interval(mid - rad, mid + rad));
    }
  return a;
}

IntervalVector random_rhs(std::size_t n, double rad, std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  IntervalVector b(n);
  for (std::size_t i = 0; i < n; ++i) {
    double mid = u(g);
    b[i] = Interval(mid - rad, mid + rad);
  }
  return b;
}

std::string slurp(const char* path) {
  std::ifstream in(path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Assembled augmented system of the 13-bus feeder (dim 146).
const IseSystem& feeder_system() {
  static const IseSystem sys = [] {
    Feeder f = parse_feeder(slurp(ISE_DATA_DIR "/feeders/ieee13.json"),
                            "ieee13.json");
    TrueState ts = solve_power_flow(f);
    Placements pl;
    pl.pmu_voltage = {"650", "671"};
    pl.scada_flow = {"632-633", "645-646", "684-652"};
    ErrorSpec es;
    es.truncated = true;
    MeasurementSet ms = synthesize_measurements(f, ts, pl, es, StreamRng(1));
    return assemble(f, ms, Variant::II);
  }();
  return sys;
}

void BM_MkoRandom(benchmark::State& state) {
  std::mt19937_64 g(7);
  auto n = static_cast<std::size_t>(state.range(0));
  IntervalMatrix a = random_matrix(n, 1e-3, g);
  IntervalVector b = random_rhs(n, 1e-3, g);
  for (auto _ : state) benchmark::DoNotOptimize(mko_solve(a, b));
}
BENCHMARK(BM_MkoRandom)->Arg(16)->Arg(64)->Arg(146);

void BM_KrawczykRandom(benchmark::State& state) {
  std::mt19937_64 g(7);
  auto n = static_cast<std::size_t>(state.range(0));
  IntervalMatrix a = random_matrix(n, 1e-3, g);
  IntervalVector b = random_rhs(n, 1e-3, g);
  for (auto _ : state) benchmark::DoNotOptimize(krawczyk_solve(a, b));
}
BENCHMARK(BM_KrawczykRandom)->Arg(16)->Arg(64);

void BM_IgeRandom(benchmark::State& state) {
  std::mt19937_64 g(7);
  auto n = static_cast<std::size_t>(state.range(0));
  IntervalMatrix a = random_matrix(n, 1e-3, g);
  IntervalVector b = random_rhs(n, 1e-3, g);
  for (auto _ : state) benchmark::DoNotOptimize(ige_solve(a, b));
}
BENCHMARK(BM_IgeRandom)->Arg(16)->Arg(64);

void BM_MkoFeeder13(benchmark::State& state) {
  const IseSystem& sys = feeder_system();
  for (auto _ : state) benchmark::DoNotOptimize(mko_solve(sys.A, sys.B));
}
BENCHMARK(BM_MkoFeeder13)->Unit(benchmark::kMillisecond);

void BM_IkoFeeder13(benchmark::State& state) {
  const IseSystem& sys = feeder_system();
  for (auto _ : state) benchmark::DoNotOptimize(iko_solve(sys.A, sys.B));
}
BENCHMARK(BM_IkoFeeder13)->Unit(benchmark::kMillisecond);

}  // namespace

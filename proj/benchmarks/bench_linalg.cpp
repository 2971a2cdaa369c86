#include <benchmark/benchmark.h>

#include "ise/interval_linalg.hpp"
#include "ise/rng.hpp"

using namespace ise;

namespace {

IntervalMatrix dense_random(std::size_t n, double rad) {
  StreamRng rng(11);
  auto s = rng.stream("mat");
  IntervalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double mid = s.uniform(-1.0, 1.0);
      if (i == j) mid += 4.0;
      double w = s.uniform(0.0, rad);
      m.set_entry(i, j, Interval(mid - w, mid + w));
    }
  return m;
}

IntervalVector random_vec(std::size_t n) {
  StreamRng rng(13);
  auto s = rng.stream("vec");
  IntervalVector v(n);
  for (std::size_t i = 0; i < n; ++i) {
    double mid = s.uniform(-1.0, 1.0);
    v[i] = Interval(mid - 0.1, mid + 0.1);
  }
  return v;
}

}  // namespace

static void BM_IntervalMatvec(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  IntervalMatrix m = dense_random(n, 0.05);
  IntervalVector v = random_vec(n);
  for (auto _ : state) {
    IntervalVector r = interval_matvec(m, v);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_IntervalMatvec)->Arg(32)->Arg(146);

static void BM_Precondition(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  IntervalMatrix a = dense_random(n, 0.05);
  Mat c = a.mid_dense().inverse();
  for (auto _ : state) {
    DenseIntervalMatrix m = identity_minus(point_times_interval_matrix(c, a));
    benchmark::DoNotOptimize(m);
  }
}
BENCHMARK(BM_Precondition)->Arg(32)->Arg(146);

static void BM_InfNorm(benchmark::State& state) {
  IntervalMatrix m = dense_random(146, 0.05);
  for (auto _ : state) {
    double x = inf_norm(m);
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_InfNorm);

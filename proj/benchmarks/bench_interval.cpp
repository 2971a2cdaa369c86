#include <benchmark/benchmark.h>

#include "ise/interval.hpp"
#include "ise/rng.hpp"

using namespace ise;

namespace {

std::vector<Interval> inputs(std::size_t n, double rad) {
  StreamRng rng(7);
  auto s = rng.stream("bench");
  std::vector<Interval> v;
  v.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double m = s.uniform(-10.0, 10.0);
    double w = s.uniform(0.0, rad);
    v.emplace_back(m - w, m + w);
  }
  return v;
}

}  // namespace

static void BM_IntervalAdd(benchmark::State& state) {
  auto v = inputs(1024, 1.0);
  std::size_t i = 0;
  for (auto _ : state) {
    Interval r = v[i % 1024] + v[(i + 1) % 1024];
    benchmark::DoNotOptimize(r);
    ++i;
  }
}
BENCHMARK(BM_IntervalAdd);

static void BM_IntervalMul(benchmark::State& state) {
  auto v = inputs(1024, 1.0);
  std::size_t i = 0;
  for (auto _ : state) {
    Interval r = v[i % 1024] * v[(i + 1) % 1024];
    benchmark::DoNotOptimize(r);
    ++i;
  }
}
BENCHMARK(BM_IntervalMul);

static void BM_IntervalDiv(benchmark::State& state) {
  auto v = inputs(1024, 0.5);
  std::size_t i = 0;
  for (auto _ : state) {
    Interval d = v[(i + 1) % 1024];
    if (d.contains(0.0)) d = d + Interval(2.0);
    Interval r = v[i % 1024] / d;
    benchmark::DoNotOptimize(r);
    ++i;
  }
}
BENCHMARK(BM_IntervalDiv);

static void BM_IntervalSqrtSquare(benchmark::State& state) {
  auto v = inputs(1024, 1.0);
  std::size_t i = 0;
  for (auto _ : state) {
    Interval r = ise::sqrt(square(v[i % 1024]));
    benchmark::DoNotOptimize(r);
    ++i;
  }
}
BENCHMARK(BM_IntervalSqrtSquare);

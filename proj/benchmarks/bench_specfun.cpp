#include <benchmark/benchmark.h>

#include "liouville/specfun.hpp"

using namespace liouville;

static void BM_Gamma(benchmark::State& state) {
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(specfun::gamma(x));
    x = (x < 20.0) ? x + 0.37 : 0.1;
  }
}
BENCHMARK(BM_Gamma);

static void BM_LegendreQ1(benchmark::State& state) {
  double y = -0.9;
  for (auto _ : state) {
    benchmark::DoNotOptimize(specfun::legendre_q1(0.7, y));
    y = (y < 0.9) ? y + 0.013 : -0.9;
  }
}
BENCHMARK(BM_LegendreQ1);

static void BM_ScanNoRoot(benchmark::State& state) {
  for (auto _ : state) {
    auto rep = specfun::scan_no_root(1e-3, 10.0, 1e-3);
    benchmark::DoNotOptimize(rep.min_gap);
  }
}
BENCHMARK(BM_ScanNoRoot);

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "liouville/strip2d.hpp"

using namespace liouville;
constexpr double kPi = std::numbers::pi;

static void BM_Residual2d(benchmark::State& state) {
  StripGrid g(kPi, 20.0, int(state.range(0)), 41);
  StripField u(g);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      u.at(i, j) = 0.1 / std::cosh(g.x(i)) * std::cos(kPi * j / (g.ny - 1.0));
  for (auto _ : state) {
    StripField r = strip2d::residual_2d(g, u);
    benchmark::DoNotOptimize(r.values.data());
  }
}
BENCHMARK(BM_Residual2d)->Arg(1001)->Arg(2001);

static void BM_NewtonSolveTrivial(benchmark::State& state) {
  StripGrid g(2.0, 20.0, 1001, 33);
  for (auto _ : state) {
    StripField init(g);
    init.values[init.values.size() / 2] = 1e-3;
    auto res = strip2d::newton_solve(2.0, g, init, 1e-11, 20);
    benchmark::DoNotOptimize(res.field.values.data());
  }
}
BENCHMARK(BM_NewtonSolveTrivial);

static void BM_Diagnostics(benchmark::State& state) {
  StripGrid g(kPi, 20.0, 1001, 33);
  for (auto _ : state) {
    auto diag = strip2d::bifurcation_diagnostics(kPi, g);
    benchmark::DoNotOptimize(diag.lambda2);
  }
}
BENCHMARK(BM_Diagnostics);

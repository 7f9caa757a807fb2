#include <benchmark/benchmark.h>

#include "liouville/negindex4d.hpp"
#include "liouville/radial3d.hpp"

using namespace liouville;

static void BM_ApplyTeps(benchmark::State& state) {
  auto grid = std::make_shared<RadialGrid>(50.0, int(state.range(0)), 1.5);
  RadialProfile u(grid, 0.1);
  for (int i = 0; i < u.n(); ++i) u.values[i] = -0.1 * grid->r[i];
  for (auto _ : state) {
    RadialProfile t = radial3d::apply_T_eps(u, 0.1);
    benchmark::DoNotOptimize(t.values.data());
  }
}
BENCHMARK(BM_ApplyTeps)->Arg(1000)->Arg(4000);

static void BM_PicardStage(benchmark::State& state) {
  auto grid = std::make_shared<RadialGrid>(50.0, 4000, 1.5);
  for (auto _ : state) {
    auto [u, rep] = radial3d::picard_solve(0.25, grid, 1e-12, 600);
    benchmark::DoNotOptimize(u.values.data());
  }
}
BENCHMARK(BM_PicardStage);

static void BM_FofT(benchmark::State& state) {
  auto grid = std::make_shared<RadialGrid>(50.0, 4000, 1.5);
  auto cont =
      radial3d::continue_eps_to_zero(radial3d::default_schedule(1e-3), grid, 1e-12);
  RadialProfile umu = radial3d::rescale_solution(cont.limit, 8.0);
  negindex4d::Eigenpair ep = negindex4d::v0_eigenpair(umu, grid);
  double t = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(negindex4d::f_of_t(t, ep.v0, umu));
    t = (t < 1e6) ? t * 1.5 : 1.0;
  }
}
BENCHMARK(BM_FofT);

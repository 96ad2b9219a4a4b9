#include <benchmark/benchmark.h>

#include "cqcode/regions.hpp"

using namespace cqcode;

static void BM_CompoundMacRegion(benchmark::State& state) {
  const CompoundFamily fam = build_example1();
  OptGrid grid;
  grid.t_card = 2;
  grid.simplex_step = 1.0 / 4;
  grid.refine_rounds = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(region_compound_mac(fam, grid).max_sum());
  }
}
BENCHMARK(BM_CompoundMacRegion)->Arg(0)->Arg(60)->Unit(benchmark::kMillisecond);

static void BM_Example2Curves(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(example2_curves(60).lm3_peak_value);
  }
}
BENCHMARK(BM_Example2Curves)->Unit(benchmark::kMillisecond);

static void BM_ConvexHull(benchmark::State& state) {
  std::vector<std::array<double, 2>> pts;
  for (int i = 0; i < 2000; ++i) {
    const double t = static_cast<double>(i) / 2000.0;
    pts.push_back({0.5 * std::cos(t) + 0.5, 0.5 * std::sin(t)});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(region_from_points(pts, Unit::bits).area());
  }
}
BENCHMARK(BM_ConvexHull)->Unit(benchmark::kMicrosecond);

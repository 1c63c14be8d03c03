#include <benchmark/benchmark.h>

#include <random>

#include "evsheaf/blocks.hpp"
#include "evsheaf/laws.hpp"
#include "evsheaf/optomotor.hpp"

using namespace evsheaf;

namespace {

ClosedLoopParams loop(std::size_t pixels) {
  ClosedLoopParams p;
  p.geometry = PixelGeometry{pixels, 2 * kPi};
  p.contrast.assign(pixels, 0.05);
  p.scene = Scene::cosine(0.5);
  for (std::size_t i = 0; i < pixels; ++i) p.i0.push_back(p.scene(p.geometry.dir(i)));
  p.regulator.f = proportional_estimator(p.geometry, 0.0);
  p.body = BodyParams{0.5, 0.5, 0.0};
  return p;
}

void BM_ClosedLoop(benchmark::State& st) {
  auto m = build_closed_loop(loop(static_cast<std::size_t>(st.range(0))));
  Events in(10000);
  for (auto _ : st) benchmark::DoNotOptimize(run(m, in, 10000));
  st.SetItemsProcessed(st.iterations() * 10000);
}
BENCHMARK(BM_ClosedLoop)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_LevelCrossing(benchmark::State& st) {
  std::mt19937_64 rng(1);
  auto in = random_linear(rng, 100000, 1, static_cast<std::size_t>(st.range(0)));
  auto m = make_level_crossing(0.05, {0.0});
  for (auto _ : st) benchmark::DoNotOptimize(run(m, in, 100000));
}
BENCHMARK(BM_LevelCrossing)->Arg(100)->Arg(10000);

void BM_CdsDecay(benchmark::State& st) {
  CdsSpec c;
  c.dynamics = [](const double*, const double* s, double* d) { d[0] = -s[0]; };
  c.s0 = {1.0};
  c.h = st.range(0);
  c.seconds_per_tick = 1e-4;
  auto m = make_cds(c);
  auto in = LinearTrajectory::constant({0.0}, 10000);
  for (auto _ : st) benchmark::DoNotOptimize(run(m, in, 10000));
}
BENCHMARK(BM_CdsDecay)->Arg(1)->Arg(10);

void BM_Merge(benchmark::State& st) {
  std::mt19937_64 rng(2);
  Tick len = st.range(0);
  auto a = random_int_events(rng, len, 0.3, 10);
  auto b = random_int_events(rng, len, 0.3, 10);
  for (auto _ : st) benchmark::DoNotOptimize(merge(a, b));
}
BENCHMARK(BM_Merge)->Arg(1000)->Arg(100000);

void BM_BlockSplitting(benchmark::State& st) {
  auto m = build_closed_loop(loop(16));
  Events in(2000);
  for (auto _ : st) benchmark::DoNotOptimize(run(m, in, st.range(0)));
}
BENCHMARK(BM_BlockSplitting)->Arg(1)->Arg(10)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

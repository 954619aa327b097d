#include <benchmark/benchmark.h>

#include "kp/area.hpp"
#include "kp/dynamics.hpp"
#include "kp/highdim.hpp"
#include "kp/random.hpp"

namespace {

kp::Configuration grid_of_disks(std::size_t n, std::uint64_t seed) {
  kp::Rng rng(seed);
  const double box = std::sqrt(static_cast<double>(n));
  std::vector<double> coords(2 * n);
  std::vector<double> radii(n);
  for (double& x : coords) x = rng.uniform(-box, box);
  for (double& r : radii) r = rng.uniform(0.5, 1.5);
  return kp::Configuration(2, std::move(coords), std::move(radii));
}

void BM_UnionArea(benchmark::State& state) {
  const kp::Configuration c = grid_of_disks(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(kp::union_area(c).total_area);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_UnionArea)->RangeMultiplier(4)->Range(4, 4096)->Complexity();

void BM_IntersectionArea(benchmark::State& state) {
  const kp::Configuration c = kp::Configuration::planar({{0, 0}, {0.5, 0.2}, {0.1, 0.6}, {0.4, -0.3}},
                                                        {1.0, 1.1, 0.9, 1.2});
  for (auto _ : state) benchmark::DoNotOptimize(kp::intersection_area(c).total_area);
}
BENCHMARK(BM_IntersectionArea);

void BM_McVolume(benchmark::State& state) {
  const kp::ExpansionPair pair = kp::random_expansion_pair(static_cast<int>(state.range(0)), 6, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kp::mc_volume(pair.p, kp::AreaMode::kUnion, 100000, 1).value);
  }
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_McVolume)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_CsikosPlanar(benchmark::State& state) {
  const kp::Motion m = kp::random_smooth_motion(static_cast<std::size_t>(state.range(0)), 5);
  kp::CsikosOptions options;
  options.compute_fd = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kp::csikos_derivative(m, 0.5, kp::AreaMode::kUnion, options).formula_value);
  }
}
BENCHMARK(BM_CsikosPlanar)->RangeMultiplier(2)->Range(2, 32);

void BM_CsikosLifted(benchmark::State& state) {
  const kp::ExpansionPair pair = kp::random_expansion_pair(2, 5, 8);
  const kp::Motion m = kp::lift_motion(pair.p, pair.q);
  kp::CsikosOptions options;
  options.compute_fd = false;
  options.samples = 20000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kp::csikos_derivative(m, 0.5, kp::AreaMode::kUnion, options).formula_value);
  }
}
BENCHMARK(BM_CsikosLifted)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

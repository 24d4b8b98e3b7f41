#include <benchmark/benchmark.h>

#include <cmath>

#include "vislab/ifs.hpp"
#include "vislab/point_cloud.hpp"
#include "vislab/projections.hpp"
#include "vislab/set_analysis.hpp"
#include "vislab/visibility.hpp"

using namespace vislab;

static void BM_FavardLength(benchmark::State& state) {
  const auto g = generate_generation(fourcorner(), static_cast<int>(state.range(0)));
  const AngleGrid grid(1024);
  for (auto _ : state) benchmark::DoNotOptimize(favard_length(g, grid));
  state.SetItemsProcessed(state.iterations() * g.nodes.size() * 1024);
}
BENCHMARK(BM_FavardLength)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

static void BM_RadialVisibility(benchmark::State& state) {
  const auto g = generate_generation(fourcorner(), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(visibility(g.nodes, {0.5, -10}));
  state.SetItemsProcessed(state.iterations() * g.nodes.size());
}
BENCHMARK(BM_RadialVisibility)->DenseRange(4, 10, 2);

static void BM_VisDelta(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  PointCloud A = centers_of(generate_generation(fourcorner(), n));
  const auto fam = build_line_family(std::pow(4.0, -n), 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(vis_delta({-0.5, -0.5}, A, fam));
}
BENCHMARK(BM_VisDelta)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

static void BM_RieszEnergy(benchmark::State& state) {
  PointCloud A = centers_of(generate_generation(fourcorner(), static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(riesz_energy(A, 1.0));
  state.SetComplexityN(static_cast<benchmark::IterationCount>(A.size()));
}
BENCHMARK(BM_RieszEnergy)->DenseRange(4, 7)->Unit(benchmark::kMillisecond)->Complexity(benchmark::oNSquared);

BENCHMARK_MAIN();

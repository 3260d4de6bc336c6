// Microbenchmarks for the hot paths: invariant evaluation on both routes,
// spectrum extraction, family tracking, and grid ingestion.

#include <benchmark/benchmark.h>

#include <vector>

#include "unlk/deformation.hpp"
#include "unlk/grid_ingest.hpp"
#include "unlk/invariant.hpp"
#include "unlk/mnus_oracle.hpp"
#include "unlk/model_gen.hpp"
#include "unlk/plane_tree.hpp"
#include "unlk/surface.hpp"

namespace {

using namespace unlk;

std::vector<PlaneTree> random_batch(int count) {
  Rng rng(12021);
  std::vector<PlaneTree> batch;
  batch.reserve(count);
  for (int i = 0; i < count; ++i) batch.push_back(random_tree(rng, 4, 12));
  return batch;
}

void BM_NuRecursive_DoubleMountain(benchmark::State& state) {
  const PlaneTree t = double_mountain();
  for (auto _ : state) {
    benchmark::DoNotOptimize(nu_recursive(t));
  }
}
BENCHMARK(BM_NuRecursive_DoubleMountain);

void BM_NuRecursive_RandomTrees(benchmark::State& state) {
  const std::vector<PlaneTree> batch = random_batch(32);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(nu_recursive(batch[i]));
    i = (i + 1) % batch.size();
  }
}
BENCHMARK(BM_NuRecursive_RandomTrees);

void BM_NuEnumeration_RandomTrees(benchmark::State& state) {
  const std::vector<PlaneTree> batch = random_batch(32);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(nu_oracle(batch[i]));
    i = (i + 1) % batch.size();
  }
}
BENCHMARK(BM_NuEnumeration_RandomTrees);

void BM_Spectrum_DoubleMountain(benchmark::State& state) {
  const PlaneTree t = double_mountain();
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectrum(t));
  }
}
BENCHMARK(BM_Spectrum_DoubleMountain);

void BM_NuSurface_Genus2(benchmark::State& state) {
  const SurfaceGraph g = genus2_figure();
  for (auto _ : state) {
    benchmark::DoNotOptimize(nu_surface(g));
  }
}
BENCHMARK(BM_NuSurface_Genus2);

void BM_Bifurcation_SpecialFamily(benchmark::State& state) {
  Rng rng(5150);
  Family fam;
  fam.kind = Family::Kind::special;
  fam.g = random_stage_profile(rng);
  fam.flatten_width = Rat(0);
  const int steps = static_cast<int>(state.range(0));
  const Rat tol = Rat(Rat(2) * family_slope_bound(fam) / steps);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bifurcation(fam, steps, tol));
  }
}
BENCHMARK(BM_Bifurcation_SpecialFamily)->Arg(8)->Arg(32);

void BM_ContourTree(benchmark::State& state) {
  const ScalarGrid grid = rasterize_single_mountain(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(contour_tree(grid));
  }
}
BENCHMARK(BM_ContourTree)->Arg(64)->Arg(128)->Arg(256);

void BM_EstimateProfiles(benchmark::State& state) {
  const ScalarGrid grid = rasterize_double_mountain(128);
  const ContourTree ct = contour_tree(grid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_profiles(ct, 64));
  }
}
BENCHMARK(BM_EstimateProfiles);

}  // namespace

BENCHMARK_MAIN();

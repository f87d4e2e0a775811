#include <benchmark/benchmark.h>

#include "pgeo/alignment.hpp"
#include "pgeo/geometry.hpp"
#include "pgeo/profiling.hpp"
#include "support/synthetic.hpp"

using namespace pgeo;
using namespace pgeo::testing;

namespace {

DissimilarityMatrix random_instance(int n, std::uint64_t seed) {
  StreamRng rng{seed};
  return cosine_dissimilarity(gaussian_matrix(n, 64, rng), make_labels(static_cast<std::size_t>(n)));
}

void BM_Smacof(benchmark::State& state) {
  const auto d = random_instance(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(smacof_mds(d));
}
BENCHMARK(BM_Smacof)->Arg(30)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_ClassicalMds(benchmark::State& state) {
  const auto d = random_instance(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(classical_mds(d, 2));
}
BENCHMARK(BM_ClassicalMds)->Arg(30)->Arg(80)->Unit(benchmark::kMicrosecond);

void BM_Rsa(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto a = random_instance(n, 3);
  const auto b = random_instance(n, 4);
  for (auto _ : state) benchmark::DoNotOptimize(rsa(a, b));
}
BENCHMARK(BM_Rsa)->Arg(30)->Arg(80)->Unit(benchmark::kMicrosecond);

void BM_BootstrapLayer(benchmark::State& state) {
  const auto model = random_instance(30, 5);
  const auto human = random_instance(30, 6);
  const auto model_map = smacof_mds(model);
  const auto human_map = smacof_mds(human);
  BootstrapOptions opts;
  for (auto _ : state)
    benchmark::DoNotOptimize(bootstrap_layer_samples(model, human, model_map, human_map, 0, opts));
}
BENCHMARK(BM_BootstrapLayer)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

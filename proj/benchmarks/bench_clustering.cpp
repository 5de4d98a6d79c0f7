#include <benchmark/benchmark.h>

#include "bench_data.hpp"
#include "rdlp/clustering.hpp"

namespace {

void BM_KMeans(benchmark::State& state) {
  const auto X = bench::profiles(static_cast<std::size_t>(state.range(0)), 30);
  const int m = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(rdlp::kmeans(X, m, 0).inertia());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(X.rows()));
}
BENCHMARK(BM_KMeans)->Args({100, 8})->Args({100, 32})->Args({1000, 8})->Args({1000, 32})->Unit(benchmark::kMillisecond);

void BM_Som(benchmark::State& state) {
  const auto X = bench::profiles(200, 30);
  const int side = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rdlp::som(X, side, 0).labels.data());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(X.rows()));
}
BENCHMARK(BM_Som)->Arg(5)->Arg(15)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_SomKMeans(benchmark::State& state) {
  const auto X = bench::profiles(200, 30);
  for (auto _ : state) benchmark::DoNotOptimize(rdlp::som_kmeans(X, 20, 12, 0).labels.data());
}
BENCHMARK(BM_SomKMeans)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "bench_data.hpp"
#include "rdlp/clustering.hpp"
#include "rdlp/quant_metrics.hpp"

namespace {

struct Fitted {
  rdlp::Matrix X;
  rdlp::KMeansResult fit;
};

Fitted fitted(std::size_t households) {
  auto X = bench::profiles(households, 30);
  auto fit = rdlp::kmeans(X, 10, 0);
  return {std::move(X), std::move(fit)};
}

// Silhouette is quadratic until the sample cap kicks in.
void BM_Silhouette(benchmark::State& state) {
  const auto f = fitted(static_cast<std::size_t>(state.range(0)));
  const auto cap = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(rdlp::silhouette(f.X, f.fit.labels, cap));
  state.counters["rows"] = static_cast<double>(f.X.rows());
}
BENCHMARK(BM_Silhouette)
    ->Args({100, 20000})
    ->Args({400, 20000})
    ->Args({400, 2000})
    ->Args({2000, 2000})
    ->Unit(benchmark::kMillisecond);

void BM_EvaluateBin(benchmark::State& state) {
  const auto f = fitted(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rdlp::evaluate_bin(f.X, f.fit.labels, f.fit.centroids).ix);
}
BENCHMARK(BM_EvaluateBin)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace

#include <benchmark/benchmark.h>

#include "cardmso/balanced.hpp"
#include "cardmso/cardmso_solver.hpp"
#include "cardmso/corpus.hpp"
#include "cardmso/partitioning.hpp"
#include "graph_families.hpp"

namespace {

using namespace cardmso;

// Cover size stays 1 while n grows.
void BM_CheckStarBipartiteEqual(benchmark::State& state) {
  const Graph g = testing::star(static_cast<std::size_t>(state.range(0)));
  const Formula f = parse_formula(corpus::bipartite_equal());
  for (auto _ : state) benchmark::DoNotOptimize(check(g, f).holds);
}
BENCHMARK(BM_CheckStarBipartiteEqual)->RangeMultiplier(2)->Range(8, 1024)->Unit(benchmark::kMillisecond);

void BM_CheckCompleteBipartiteColouring(benchmark::State& state) {
  const Graph g = testing::complete_bipartite(2, static_cast<std::size_t>(state.range(0)));
  const Formula f = parse_formula(corpus::equitable_coloring(3));
  for (auto _ : state) benchmark::DoNotOptimize(check(g, f).holds);
}
BENCHMARK(BM_CheckCompleteBipartiteColouring)->Arg(4)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_CheckIdsCycle(benchmark::State& state) {
  const Graph g = testing::cycle(static_cast<std::size_t>(state.range(0)));
  const Formula f = substitute_params(parse_formula(corpus::independent_dominating_set()), {{"k", 2}});
  for (auto _ : state) benchmark::DoNotOptimize(check(g, f).holds);
}
BENCHMARK(BM_CheckIdsCycle)->DenseRange(4, 8, 1)->Unit(benchmark::kMillisecond);

void BM_PartitionIndependence(benchmark::State& state) {
  const Graph g = testing::complete_bipartite(3, static_cast<std::size_t>(state.range(0)));
  const Formula f = parse_formula(corpus::independence());
  for (auto _ : state) benchmark::DoNotOptimize(mso_partition(g, f, 2).holds);
}
BENCHMARK(BM_PartitionIndependence)->RangeMultiplier(4)->Range(4, 256)->Unit(benchmark::kMillisecond);

void BM_CbalancedStar(benchmark::State& state) {
  const Graph g = testing::star(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cbalanced(g, 2).cut_value);
}
BENCHMARK(BM_CbalancedStar)->RangeMultiplier(4)->Range(8, 512)->Unit(benchmark::kMillisecond);

void BM_CbalancedPath(benchmark::State& state) {
  const Graph g = testing::path(static_cast<std::size_t>(state.range(0)));
  const auto c = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(cbalanced(g, c).cut_value);
}
BENCHMARK(BM_CbalancedPath)->ArgsProduct({{6, 8}, {2, 3}})->Unit(benchmark::kMillisecond);

}  // namespace

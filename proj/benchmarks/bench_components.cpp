#include <benchmark/benchmark.h>

#include <random>

#include "cardmso/corpus.hpp"
#include "cardmso/ilp.hpp"
#include "cardmso/mso_eval.hpp"
#include "graph_families.hpp"

namespace {

using namespace cardmso;

void BM_MinVertexCover(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const Graph g = testing::random_graph(static_cast<std::size_t>(state.range(0)), 0.15, rng);
  for (auto _ : state) benchmark::DoNotOptimize(min_vertex_cover(g, 64).size);
}
BENCHMARK(BM_MinVertexCover)->DenseRange(10, 30, 10);

void BM_NdPartition(benchmark::State& state) {
  const Graph g = testing::complete_bipartite(5, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(nd_partition(g).num_types());
}
BENCHMARK(BM_NdPartition)->RangeMultiplier(4)->Range(16, 1024);

void BM_ParseFormula(benchmark::State& state) {
  const std::string text = corpus::equitable_connected(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(parse_formula(text).constraints.size());
}
BENCHMARK(BM_ParseFormula)->DenseRange(2, 5, 1);

void BM_MsoCheckPadded(benchmark::State& state) {
  const Graph g = testing::pad_with_twins(testing::cycle(4), 0, static_cast<std::size_t>(state.range(0)));
  const Formula f = parse_formula("exists X. forall u. forall v. adj(u, v) -> (u in X <-> not v in X)");
  for (auto _ : state) benchmark::DoNotOptimize(mso_check(g, f));
}
BENCHMARK(BM_MsoCheckPadded)->DenseRange(2, 26, 8);

void BM_IlpFeasibility(benchmark::State& state) {
  IlpInstance inst;
  std::vector<IlpTerm> sum, weighted;
  const auto n = static_cast<std::size_t>(state.range(0));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t x = inst.add_variable("x" + std::to_string(i), 0, 50);
    sum.push_back({x, 1});
    weighted.push_back({x, static_cast<std::int64_t>(i % 5) + 2});
  }
  inst.add_constraint(sum, Relation::kEqual, 40);
  inst.add_constraint(weighted, Relation::kEqual, 133);
  for (auto _ : state) benchmark::DoNotOptimize(solve_feasibility(inst).status);
}
BENCHMARK(BM_IlpFeasibility)->DenseRange(4, 16, 4);

}  // namespace

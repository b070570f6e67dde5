#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "cardmso/cardmso_solver.hpp"
#include "cardmso/corpus.hpp"
#include "cardmso/errors.hpp"
#include "cardmso/mso_eval.hpp"
#include "cardmso/oracle.hpp"
#include "graph_families.hpp"

namespace cardmso {
namespace {

using testing::connected_graphs_up_to;

FormulaStats stats_of(std::size_t m, std::size_t q_s, std::size_t q_v) {
  FormulaStats s;
  s.m = m;
  s.q_s = q_s;
  s.q_v = q_v;
  return s;
}

Formula bipartiteness_body() {
  return pre_evaluate(parse_formula(corpus::bipartite_equal()), PreEvaluation{{true, true}});
}

// Plain sentences without a prefix, for negation tests.
std::vector<std::string> closed_sentences() {
  return {
      corpus::independence(),
      corpus::clique(),
      "forall x. exists y. adj(x, y)",
      "exists x. forall y. x = y or adj(x, y)",
      "not (exists X. forall x. x in X)",
      "true and not (exists X, Y. (forall v. v in X <-> not v in Y) and forall u. forall v. adj(u, v) -> "
      "(u in X <-> v in Y))",
      "true and forall X. (exists x. x in X) -> exists x, y. x in X and not y in X and adj(x, y) or X = X",
  };
}

std::vector<std::uint64_t> to_masks(const PrefixAssignment& chi) { return testing::masks(chi.sets); }

TEST(ReduceGraph, ThresholdExamples) {
  Graph g20 = testing::edgeless(20);
  ReducedGraph rg = reduce_graph(g20, nd_partition(g20), stats_of(2, 1, 2));
  EXPECT_EQ(rg.graph.num_vertices(), 16u);
  EXPECT_EQ(rg.original_sizes, std::vector<std::size_t>{20});
  EXPECT_EQ(rg.kept[0].size(), 16u);
  EXPECT_EQ(rg.deleted[0].size(), 4u);

  Graph g3 = testing::edgeless(3);
  ReducedGraph small = reduce_graph(g3, nd_partition(g3), stats_of(2, 1, 2));
  EXPECT_EQ(small.graph, g3);
  EXPECT_TRUE(small.deleted[0].empty());
}

TEST(ReduceGraph, StarShrinksToEightLeaves) {
  Formula f = parse_formula(corpus::bipartite_equal());
  const FormulaStats s = analyze(f);
  Graph star = testing::star(99);
  ReducedGraph rg = reduce_graph(star, type_partition(star, min_vertex_cover(star)), s);
  EXPECT_EQ(rg.graph.num_vertices(), 9u);
  EXPECT_EQ(rg.graph.num_edges(), 8u);
  EXPECT_EQ(rg.graph.degree(0), 8u);
  EXPECT_EQ(rg.to_original.front(), 0u);
  // K_{1,99} has no bipartition into equal halves and neither does the reduced star.
  EXPECT_FALSE(check(star, f).holds);
  EXPECT_FALSE(oracle::brute_check(rg.graph, f, 9));
}

TEST(ReduceGraph, KeepsOrderAndMapsBack) {
  Graph g = testing::pad_with_twins(testing::path(3), 0, 10);
  FormulaStats s = stats_of(1, 0, 1);
  TypePartition tp = nd_partition(g);
  ReducedGraph rg = reduce_graph(g, tp, s);
  ASSERT_EQ(rg.types.num_types(), tp.num_types());
  for (std::size_t t = 0; t < tp.num_types(); ++t) {
    EXPECT_EQ(rg.kept[t].size() + rg.deleted[t].size(), tp.types[t].size());
    EXPECT_LE(rg.kept[t].size(), s.reduce_threshold());
    EXPECT_TRUE(std::is_sorted(rg.kept[t].begin(), rg.kept[t].end()));
  }
  EXPECT_TRUE(std::is_sorted(rg.to_original.begin(), rg.to_original.end()));
  for (const auto& [u, v] : rg.graph.edges()) EXPECT_TRUE(g.adjacent(rg.to_original[u], rg.to_original[v]));
}

TEST(MsoCheck, Examples) {
  EXPECT_TRUE(mso_check(testing::cycle(4), bipartiteness_body()));
  EXPECT_TRUE(mso_check(testing::complete(3),
                        parse_formula("exists X. (forall u. forall v. (u in X and v in X) -> not adj(u, v)) and "
                                      "exists x. x in X")));
  EXPECT_TRUE(mso_check(Graph(0), parse_formula("forall x. false")));
  EXPECT_FALSE(mso_check(testing::cycle(5), bipartiteness_body()));
  EXPECT_THROW(mso_check(testing::cycle(4), parse_formula(corpus::bipartite_equal())), InputError);
}

TEST(MsoCheck, MatchesOracle) {
  std::vector<Formula> fs;
  for (const auto& s : closed_sentences()) fs.push_back(parse_formula(s));
  fs.push_back(bipartiteness_body());
  fs.push_back(pre_evaluate(parse_formula(corpus::equitable_connected(2)), pre_evaluation_at(0, 6)));
  for (const Graph& g : connected_graphs_up_to(6))
    for (const Formula& f : fs) EXPECT_EQ(mso_check(g, f), oracle::brute_check(g, f)) << print_formula(f);
}

TEST(MsoCheck, DeMorgan) {
  for (const auto& s : closed_sentences()) {
    Formula f = parse_formula(s);
    Formula nf = parse_formula("not (" + s + ")");
    for (const Graph& g : connected_graphs_up_to(5)) EXPECT_NE(mso_check(g, f), mso_check(g, nf)) << s;
  }
}

TEST(MsoCheck, IsomorphismInvariance) {
  std::mt19937_64 rng(5);
  std::vector<Formula> fs;
  for (const auto& s : closed_sentences()) fs.push_back(parse_formula(s));
  fs.push_back(bipartiteness_body());
  for (const Graph& g : connected_graphs_up_to(6)) {
    std::vector<Vertex> perm(g.num_vertices());
    for (Vertex v = 0; v < perm.size(); ++v) perm[v] = v;
    std::shuffle(perm.begin(), perm.end(), rng);
    Graph h = g.relabeled(perm);
    for (const Formula& f : fs) EXPECT_EQ(mso_check(g, f), mso_check(h, f));
  }
}

TEST(MsoCheck, SymmetryPruningChangesNothing) {
  MsoOptions plain;
  plain.symmetry = false;
  std::vector<Formula> fs;
  for (const auto& s : closed_sentences()) fs.push_back(parse_formula(s));
  fs.push_back(bipartiteness_body());
  for (const char* name : {"equitable_coloring", "equitable_connected"})
    fs.push_back(pre_evaluate(parse_formula(corpus::text(name, 2)), pre_evaluation_at(0, 6)));
  std::vector<Graph> graphs = connected_graphs_up_to(6);
  graphs.push_back(testing::star(9));
  graphs.push_back(testing::complete_bipartite(3, 6));
  graphs.push_back(testing::pad_with_twins(testing::path(4), 1, 6));
  for (const Graph& g : graphs)
    for (const Formula& f : fs) EXPECT_EQ(mso_check(g, f), mso_check(g, f, plain)) << print_formula(f);
}

TEST(MsoCheck, NodeBudget) {
  MsoOptions tight;
  tight.node_budget = 10;
  EXPECT_THROW(mso_check(testing::cycle(6), bipartiteness_body(), tight), BudgetExceeded);
}

TEST(SatisfyingPrefixAssignments, Examples) {
  std::vector<PrefixAssignment> seen;
  auto collect = [&](const PrefixAssignment& chi) {
    seen.push_back(chi);
    return true;
  };
  satisfying_prefix_assignments(testing::complete(2), parse_formula("exists Z. forall x. x in Z"), collect);
  ASSERT_EQ(seen.size(), 1u);
  EXPECT_EQ(seen[0].sets[0], VertexSet::full(2));

  seen.clear();
  satisfying_prefix_assignments(testing::path(5), parse_formula("exists Z. true"), collect);
  EXPECT_EQ(seen.size(), 32u);
  EXPECT_EQ(seen.front().sets[0], VertexSet(5));
  EXPECT_EQ(seen.back().sets[0], VertexSet::full(5));

  seen.clear();
  satisfying_prefix_assignments(testing::path(3), bipartiteness_body(), collect);
  std::set<std::pair<std::uint64_t, std::uint64_t>> got;
  for (const auto& chi : seen) got.insert({to_masks(chi)[0], to_masks(chi)[1]});
  EXPECT_EQ(got, (std::set<std::pair<std::uint64_t, std::uint64_t>>{{0b010, 0b101}, {0b101, 0b010}}));
}

TEST(SatisfyingPrefixAssignments, StopsEarly) {
  std::size_t calls = 0;
  satisfying_prefix_assignments(testing::path(4), parse_formula("exists Z. true"), [&](const PrefixAssignment&) {
    return ++calls < 3;
  });
  EXPECT_EQ(calls, 3u);
}

// Exactly the assignments under which the body holds, each once, in counter order.
TEST(SatisfyingPrefixAssignments, MatchesDirectEnumeration) {
  std::vector<Formula> bodies = {
      bipartiteness_body(),
      pre_evaluate(parse_formula(corpus::equitable_coloring(2)), pre_evaluation_at(0, 6)),
      pre_evaluate(parse_formula(corpus::equitable_connected(2)), pre_evaluation_at(0, 6)),
      parse_formula("exists X, Y. forall v. v in X -> exists u. u in Y and adj(u, v)"),
  };
  for (const Graph& g : connected_graphs_up_to(5)) {
    for (const Formula& body : bodies) {
      const std::size_t n = g.num_vertices();
      const std::size_t m = body.prefix_size();
      std::vector<std::vector<std::uint64_t>> expected;
      // Z_1 is the most significant digit, vertex n-1 the most significant bit.
      for (std::uint64_t code = 0; code < (std::uint64_t{1} << (n * m)); ++code) {
        std::vector<std::uint64_t> ms(m);
        for (std::size_t i = 0; i < m; ++i) ms[i] = (code >> ((m - 1 - i) * n)) & ((std::uint64_t{1} << n) - 1);
        if (oracle::brute_holds_under(g, body, ms)) expected.push_back(ms);
      }
      std::vector<std::vector<std::uint64_t>> got;
      satisfying_prefix_assignments(g, body, [&](const PrefixAssignment& chi) {
        got.push_back(to_masks(chi));
        return true;
      });
      EXPECT_EQ(got, expected) << print_formula(body);
    }
  }
}

TEST(Subtypes, SignatureOrder) {
  Graph g = testing::star(3);
  TypePartition tp = type_partition(g, min_vertex_cover(g));
  PrefixAssignment chi{{VertexSet(4, {1, 2}), VertexSet(4, {0, 2})}, PrefixAssignment::Carrier::kFull};
  EXPECT_EQ(signature_of(chi, 0), 0b10u);
  EXPECT_EQ(signature_of(chi, 2), 0b11u);
  EXPECT_EQ(signature_of(chi, 3), 0b00u);
  std::vector<Subtype> st = subtypes(tp, chi);
  ASSERT_EQ(st.size(), 8u);
  EXPECT_EQ(st[2].type, 0u);
  EXPECT_EQ(st[2].members, std::vector<Vertex>{0});
  EXPECT_EQ(st[4 + 0].members, std::vector<Vertex>{3});
  EXPECT_EQ(st[4 + 1].members, std::vector<Vertex>{1});
  EXPECT_EQ(st[4 + 3].members, std::vector<Vertex>{2});
  EXPECT_TRUE(st[4 + 2].members.empty());
}

TEST(HoldsUnder, ConstraintsEvaluatedNumerically) {
  Formula f = parse_formula(corpus::bipartite_equal());
  Graph c4 = testing::cycle(4);
  PrefixAssignment equal{{VertexSet(4, {0, 2}), VertexSet(4, {1, 3})}, PrefixAssignment::Carrier::kFull};
  EXPECT_TRUE(holds_under(c4, f, equal));
  EXPECT_EQ(constraint_values(f, equal), (PreEvaluation{{true, true}}));
  Graph p3 = testing::path(3);
  PrefixAssignment lopsided{{VertexSet(3, {1}), VertexSet(3, {0, 2})}, PrefixAssignment::Carrier::kFull};
  EXPECT_FALSE(holds_under(p3, f, lopsided));
  EXPECT_EQ(constraint_values(f, lopsided), (PreEvaluation{{true, false}}));
  EXPECT_TRUE(holds_under(p3, pre_evaluate(f, PreEvaluation{{true, true}}), lopsided));
}

}  // namespace
}  // namespace cardmso

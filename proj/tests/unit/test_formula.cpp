#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "cardmso/corpus.hpp"
#include "cardmso/errors.hpp"
#include "cardmso/formula.hpp"
#include "cardmso/oracle.hpp"
#include "graph_families.hpp"

namespace cardmso {
namespace {

Rho card(int prefix_index, const std::string& name) {
  RhoTerm t;
  t.kind = RhoTerm::Kind::kCardinality;
  t.name = name;
  t.prefix_index = prefix_index;
  return {t};
}

Rho constant(std::int64_t v) {
  RhoTerm t;
  t.value = v;
  return {t};
}

std::size_t count_constraint_leaves(const Node& n) {
  std::size_t k = n.kind == NodeKind::kConstraint;
  for (const auto& c : n.children) k += count_constraint_leaves(*c);
  return k;
}

std::vector<std::string> all_corpus_texts() {
  std::vector<std::string> out;
  for (const auto& name : corpus::names())
    for (std::size_t c : {1, 2, 3}) out.push_back(corpus::text(name, c));
  out.push_back("exists Z. [|Z| <= 3] and not [5 <= |Z|]");
  out.push_back("exists Y, Z. [|Y| + |Y| - 3 < |Z| + $p] -> forall x. x in Y <-> !(x in Z)");
  out.push_back("exists Z. forall W. (W = Z) | (exists v. v in W & not v in Z) | true");
  out.push_back("forall x. false");
  return out;
}

TEST(FormulaParse, BipartiteEqual) {
  Formula f = parse_formula(corpus::bipartite_equal());
  EXPECT_EQ(f.prefix, (std::vector<std::string>{"X1", "X2"}));
  ASSERT_EQ(f.constraints.size(), 2u);
  EXPECT_EQ(f.constraints[0], (LinearConstraint{card(0, "X1"), card(1, "X2")}));
  EXPECT_EQ(f.constraints[1], (LinearConstraint{card(1, "X2"), card(0, "X1")}));
}

TEST(FormulaParse, SingleEquality) {
  Formula f = parse_formula("exists Z. [|Z| = 0]");
  EXPECT_EQ(f.prefix_size(), 1u);
  ASSERT_EQ(f.constraints.size(), 2u);
  EXPECT_EQ(f.constraints[0], (LinearConstraint{card(0, "Z"), constant(0)}));
  EXPECT_EQ(f.constraints[1], (LinearConstraint{constant(0), card(0, "Z")}));
}

// a < b is read as [a <= b] and not [b <= a].
TEST(FormulaParse, StrictInequality) {
  Formula f = parse_formula("exists Z. [|Z| < 3]");
  ASSERT_EQ(f.constraints.size(), 2u);
  EXPECT_EQ(print_formula(f), "exists Z. [|Z| <= 3] and not [3 <= |Z|]");
  for (std::int64_t z = 0; z <= 5; ++z)
    EXPECT_EQ(evaluate_constraint(f.constraints[0], {z}) && !evaluate_constraint(f.constraints[1], {z}), z < 3);
}

TEST(FormulaParse, IdsParameter) {
  Formula f = parse_formula(corpus::independent_dominating_set());
  EXPECT_EQ(f.parameters(), std::vector<std::string>{"k"});
  EXPECT_EQ(f.prefix, std::vector<std::string>{"X"});
}

TEST(FormulaParse, Errors) {
  EXPECT_THROW(parse_formula("exists Z. forall Y. [|Y| <= 1]"), ParseError);  // Y is not a prefix variable
  EXPECT_THROW(parse_formula("forall x. x in Q"), ParseError);                 // unbound
  EXPECT_THROW(parse_formula("exists Z. [|Z| <= ]"), ParseError);
  EXPECT_THROW(parse_formula("exists Z. x in Z"), ParseError);
  EXPECT_THROW(parse_formula("forall x. adj(x, Y)"), ParseError);
  EXPECT_THROW(parse_formula("exists Z. (true"), ParseError);
  try {
    parse_formula("exists Z.\n  [|Z| <= ]");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(FormulaParse, RoundTrip) {
  for (const auto& text : all_corpus_texts()) {
    Formula f = parse_formula(text);
    Formula g = parse_formula(print_formula(f));
    EXPECT_TRUE(structurally_equal(*f.body, *g.body)) << text;
    EXPECT_EQ(f.prefix, g.prefix);
    EXPECT_EQ(f.constraints, g.constraints);
    EXPECT_EQ(print_formula(g), print_formula(f));
  }
}

TEST(FormulaAnalyze, Examples) {
  FormulaStats s = analyze(parse_formula(corpus::bipartite_equal()));
  EXPECT_EQ(s.m, 2u);
  EXPECT_EQ(s.q_s, 0u);
  EXPECT_EQ(s.q_v, 2u);
  EXPECT_EQ(s.constraint_count, 2u);

  FormulaStats e = analyze(parse_formula(corpus::equitable_coloring(3)));
  EXPECT_EQ(e.m, 3u);
  EXPECT_EQ(e.q_s, 0u);
  EXPECT_EQ(e.q_v, 2u);

  FormulaStats z = analyze(parse_formula("exists Z. [|Z| = 0]"));
  EXPECT_EQ(z.m, 1u);
  EXPECT_EQ(z.q_s, 0u);
  EXPECT_EQ(z.q_v, 0u);
  EXPECT_EQ(z.small_threshold(), 1u);
  EXPECT_EQ(z.reduce_threshold(), 2u);
}

TEST(FormulaAnalyze, Thresholds) {
  FormulaStats s;
  s.m = 2;
  s.q_s = 1;
  s.q_v = 2;
  EXPECT_EQ(s.small_threshold(), 4u);
  EXPECT_EQ(s.reduce_threshold(), 16u);
}

TEST(FormulaAnalyze, CountsDistinctNames) {
  FormulaStats s = analyze(parse_formula("exists Z. (forall x. x in Z) and (forall x. exists W. x in W) and exists W. true"));
  EXPECT_EQ(s.q_v, 1u);
  EXPECT_EQ(s.q_s, 1u);
}

TEST(FormulaAnalyze, InvariantUnderRenaming) {
  FormulaStats a = analyze(parse_formula(corpus::equitable_connected(3)));
  std::string renamed = corpus::equitable_connected(3);
  for (auto [from, to] : {std::pair{"T", "Sub"}, std::pair{"x", "zz"}, std::pair{"a", "p"}}) {
    std::string out;
    for (std::size_t i = 0; i < renamed.size();) {
      const bool word_start = i == 0 || !std::isalnum(static_cast<unsigned char>(renamed[i - 1]));
      const std::size_t len = std::char_traits<char>::length(from);
      if (word_start && renamed.compare(i, len, from) == 0 &&
          (i + len == renamed.size() || !std::isalnum(static_cast<unsigned char>(renamed[i + len])))) {
        out += to;
        i += len;
      } else {
        out += renamed[i++];
      }
    }
    renamed = out;
  }
  ASSERT_NE(renamed, corpus::equitable_connected(3));
  FormulaStats b = analyze(parse_formula(renamed));
  EXPECT_EQ(a.m, b.m);
  EXPECT_EQ(a.q_s, b.q_s);
  EXPECT_EQ(a.q_v, b.q_v);
  EXPECT_EQ(a.constraint_count, b.constraint_count);
}

TEST(FormulaParams, Substitution) {
  Formula ids = substitute_params(parse_formula(corpus::independent_dominating_set()), {{"k", 2}});
  EXPECT_TRUE(ids.parameters().empty());
  ASSERT_EQ(ids.constraints.size(), 2u);
  EXPECT_EQ(ids.constraints[0], (LinearConstraint{card(0, "X"), constant(2)}));
  EXPECT_EQ(ids.constraints[1], (LinearConstraint{constant(2), card(0, "X")}));

  Formula plain = parse_formula(corpus::bipartite_equal());
  Formula same = substitute_params(plain, {});
  EXPECT_TRUE(structurally_equal(*plain.body, *same.body));
  EXPECT_EQ(plain.constraints, same.constraints);

  Formula shifted = substitute_params(parse_formula("exists Z. [|Z| = $k+1]"), {{"k", 3}});
  EXPECT_EQ(shifted.constraints[0], (LinearConstraint{card(0, "Z"), constant(4)}));
  EXPECT_EQ(shifted.constraints[1], (LinearConstraint{constant(4), card(0, "Z")}));

  Formula negative = substitute_params(parse_formula("exists Z. [|Z| <= $k]"), {{"k", -2}});
  EXPECT_FALSE(evaluate_constraint(negative.constraints[0], {0}));
}

TEST(FormulaParams, MissingAndUnused) {
  Formula ids = parse_formula(corpus::independent_dominating_set());
  EXPECT_THROW(substitute_params(ids, {}), InputError);
  std::vector<std::string> unused;
  substitute_params(ids, {{"k", 1}, {"j", 4}}, &unused);
  EXPECT_EQ(unused, std::vector<std::string>{"j"});
}

TEST(FormulaPreEvaluate, Examples) {
  Formula f = parse_formula("exists Z. [|Z| <= 3] and not [5 <= |Z|]");
  Formula g = pre_evaluate(f, PreEvaluation{{true, false}});
  EXPECT_EQ(print_formula(g), "exists Z. true and not false");
  EXPECT_TRUE(g.constraints.empty());

  Formula none = parse_formula(corpus::independence());
  Formula same = pre_evaluate(none, PreEvaluation{});
  EXPECT_TRUE(structurally_equal(*none.body, *same.body));

  Formula bip = pre_evaluate(parse_formula(corpus::bipartite_equal()), PreEvaluation{{true, true}});
  EXPECT_EQ(count_constraint_leaves(*bip.body), 0u);
  EXPECT_EQ(bip.prefix.size(), 2u);

  EXPECT_THROW(pre_evaluate(f, PreEvaluation{{true}}), InputError);
}

TEST(FormulaPreEvaluate, NoConstraintLeavesForAnyAlpha) {
  Formula f = parse_formula(corpus::equitable_coloring(3));
  const std::size_t k = f.constraints.size();
  ASSERT_EQ(k, 18u);
  for (std::uint64_t i : {std::uint64_t{0}, std::uint64_t{1}, std::uint64_t{12345}, (std::uint64_t{1} << k) - 1}) {
    Formula g = pre_evaluate(f, pre_evaluation_at(i, k));
    EXPECT_EQ(count_constraint_leaves(*g.body), 0u);
    EXPECT_TRUE(g.constraints.empty());
  }
}

TEST(FormulaPreEvaluate, CounterOrder) {
  EXPECT_EQ(pre_evaluation_at(0, 3), (PreEvaluation{{true, true, true}}));
  EXPECT_EQ(pre_evaluation_at(1, 3), (PreEvaluation{{false, true, true}}));
  EXPECT_EQ(pre_evaluation_at(6, 3), (PreEvaluation{{true, false, false}}));
}

// Under any prefix assignment the constraint values give exactly one complying
// pre-evaluation, and substituting it preserves the body's truth.
TEST(FormulaPreEvaluate, ComplianceConsistency) {
  std::mt19937_64 rng(99);
  const std::vector<std::string> texts = {
      corpus::bipartite_equal(), corpus::equitable_coloring(2), corpus::equitable_connected(2),
      print_formula(substitute_params(parse_formula(corpus::independent_dominating_set()), {{"k", 2}}))};
  for (const auto& text : texts) {
    Formula f = parse_formula(text);
    for (const Graph& g : testing::connected_graphs_up_to(5)) {
      const std::uint64_t full = (std::uint64_t{1} << g.num_vertices()) - 1;
      for (int trial = 0; trial < 4; ++trial) {
        std::vector<std::uint64_t> masks(f.prefix_size());
        std::vector<std::int64_t> sizes;
        for (auto& m : masks) {
          m = rng() & full;
          sizes.push_back(std::popcount(m));
        }
        PreEvaluation alpha;
        for (const auto& c : f.constraints) alpha.values.push_back(evaluate_constraint(c, sizes));
        std::size_t complying = 0;
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << f.constraints.size()); ++i)
          complying += pre_evaluation_at(i, f.constraints.size()) == alpha;
        EXPECT_EQ(complying, 1u);
        EXPECT_EQ(oracle::brute_holds_under(g, f, masks), oracle::brute_holds_under(g, pre_evaluate(f, alpha), masks));
      }
    }
  }
}

TEST(FormulaClosedSentence, FoldsPrefix) {
  Formula f = pre_evaluate(parse_formula(corpus::bipartite_equal()), PreEvaluation{{true, true}});
  Formula closed = as_closed_sentence(f);
  EXPECT_TRUE(closed.prefix.empty());
  EXPECT_THROW(as_closed_sentence(parse_formula(corpus::bipartite_equal())), InputError);
  for (const Graph& g : testing::connected_graphs_up_to(5))
    EXPECT_EQ(oracle::brute_check(g, f), oracle::brute_check(g, closed));
}

TEST(FormulaRho, Evaluate) {
  Formula f = parse_formula("exists Y, Z. [|Y| + |Y| - 3 <= |Z| + 1]");
  ASSERT_EQ(f.constraints.size(), 1u);
  EXPECT_EQ(evaluate_rho(f.constraints[0].lhs, {4, 0}), 5);
  EXPECT_EQ(evaluate_rho(f.constraints[0].rhs, {4, 7}), 8);
  EXPECT_TRUE(evaluate_constraint(f.constraints[0], {2, 0}));
  EXPECT_FALSE(evaluate_constraint(f.constraints[0], {3, 1}));
}

}  // namespace
}  // namespace cardmso

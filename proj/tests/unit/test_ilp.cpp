#include <gtest/gtest.h>

#include <limits>
#include <optional>
#include <random>

#include "cardmso/errors.hpp"
#include "cardmso/ilp.hpp"

namespace cardmso {
namespace {

struct Grid {
  bool feasible = false;
  std::optional<std::int64_t> minimum;
};

Grid grid_search(const IlpInstance& inst) {
  Grid out;
  const auto& vars = inst.variables();
  std::vector<std::int64_t> x;
  for (const auto& v : vars) x.push_back(v.lower);
  while (true) {
    if (inst.satisfied_by(x)) {
      out.feasible = true;
      if (inst.objective()) {
        const std::int64_t val = inst.objective_value(x);
        if (!out.minimum || val < *out.minimum) out.minimum = val;
      }
    }
    std::size_t i = 0;
    while (i < x.size() && x[i] == vars[i].upper) x[i] = vars[i].lower, ++i;
    if (i == x.size()) break;
    ++x[i];
  }
  return out;
}

IlpInstance random_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nvars(1, 4), ncons(0, 6), bound(0, 6), coef(-3, 3), rel(0, 2), rhs(-10, 15);
  IlpInstance inst;
  const int n = nvars(rng);
  for (int i = 0; i < n; ++i) {
    int a = bound(rng), b = bound(rng);
    if (a > b) std::swap(a, b);
    inst.add_variable("x" + std::to_string(i), a, b);
  }
  const int k = ncons(rng);
  for (int j = 0; j < k; ++j) {
    std::vector<IlpTerm> terms;
    for (int i = 0; i < n; ++i) {
      const int c = coef(rng);
      if (c != 0) terms.push_back({static_cast<std::size_t>(i), c});
    }
    inst.add_constraint(std::move(terms), static_cast<Relation>(rel(rng)), rhs(rng));
  }
  std::vector<IlpTerm> obj;
  for (int i = 0; i < n; ++i) obj.push_back({static_cast<std::size_t>(i), coef(rng)});
  inst.set_objective(obj);
  return inst;
}

TEST(IlpFeasibility, Examples) {
  IlpInstance pinned;
  std::size_t x = pinned.add_variable("x", 3, 3);
  pinned.add_constraint({{x, 1}}, Relation::kGreaterEqual, 5);
  EXPECT_EQ(solve_feasibility(pinned).status, IlpStatus::kInfeasible);
  EXPECT_TRUE(solve_feasibility(pinned).values.empty());

  IlpInstance two;
  std::size_t a = two.add_variable("x", 0, 10);
  std::size_t b = two.add_variable("y", 0, 10);
  two.add_constraint({{a, 1}, {b, 1}}, Relation::kEqual, 4);
  two.add_constraint({{a, 1}, {b, -1}}, Relation::kEqual, 0);
  IlpResult r = solve_feasibility(two);
  EXPECT_EQ(r.status, IlpStatus::kFeasible);
  EXPECT_EQ(r.values, (std::vector<std::int64_t>{2, 2}));
}

TEST(IlpFeasibility, LowestValueFirst) {
  IlpInstance inst;
  std::size_t x = inst.add_variable("x", 0, 5);
  std::size_t y = inst.add_variable("y", 0, 5);
  inst.add_constraint({{x, 1}, {y, 1}}, Relation::kGreaterEqual, 3);
  IlpResult r = solve_feasibility(inst);
  ASSERT_EQ(r.status, IlpStatus::kFeasible);
  EXPECT_EQ(r.values, (std::vector<std::int64_t>{0, 3}));
}

TEST(IlpFeasibility, NoVariables) {
  IlpInstance empty;
  EXPECT_EQ(solve_feasibility(empty).status, IlpStatus::kFeasible);
  empty.add_constraint({}, Relation::kLessEqual, -1);
  EXPECT_EQ(solve_feasibility(empty).status, IlpStatus::kInfeasible);
}

TEST(IlpMin, Examples) {
  IlpInstance one;
  std::size_t x = one.add_variable("x", 2, 9);
  one.set_objective({{x, 1}});
  IlpResult r = solve_min(one);
  EXPECT_EQ(r.status, IlpStatus::kOptimal);
  EXPECT_EQ(r.objective_value, 2);
  EXPECT_EQ(r.values, std::vector<std::int64_t>{2});

  IlpInstance two;
  std::size_t a = two.add_variable("x", 0, 5);
  std::size_t b = two.add_variable("y", 0, 5);
  two.add_constraint({{a, 1}, {b, 1}}, Relation::kGreaterEqual, 3);
  two.set_objective({{a, 1}, {b, 1}});
  EXPECT_EQ(solve_min(two).objective_value, 3);

  two.add_constraint({{a, 1}}, Relation::kGreaterEqual, 6);
  EXPECT_EQ(solve_min(two).status, IlpStatus::kInfeasible);
}

TEST(IlpMin, RequiresObjective) {
  IlpInstance inst;
  inst.add_variable("x", 0, 1);
  EXPECT_THROW(solve_min(inst), InputError);
}

TEST(IlpMin, NegativeObjective) {
  IlpInstance inst;
  std::size_t x = inst.add_variable("x", -4, 4);
  std::size_t y = inst.add_variable("y", 0, 3);
  inst.add_constraint({{x, 1}, {y, 2}}, Relation::kLessEqual, 1);
  inst.set_objective({{x, 1}, {y, -3}});
  IlpResult r = solve_min(inst);
  EXPECT_EQ(r.objective_value, grid_search(inst).minimum.value());
  EXPECT_TRUE(inst.satisfied_by(r.values));
}

TEST(IlpRandom, MatchesGridEnumeration) {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 400; ++trial) {
    IlpInstance inst = random_instance(rng);
    const Grid grid = grid_search(inst);
    IlpResult feas = solve_feasibility(inst);
    EXPECT_EQ(feas.status == IlpStatus::kFeasible, grid.feasible) << inst.dump();
    if (grid.feasible) EXPECT_TRUE(inst.satisfied_by(feas.values));
    IlpResult opt = solve_min(inst);
    EXPECT_EQ(opt.status == IlpStatus::kOptimal, grid.feasible);
    if (grid.feasible) {
      EXPECT_EQ(opt.objective_value, *grid.minimum) << inst.dump();
      EXPECT_EQ(inst.objective_value(opt.values), opt.objective_value);
    }
  }
}

// Multiplying each row by a positive integer changes neither status nor optimum.
TEST(IlpRandom, RowScalingInvariance) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> factor(2, 9);
  for (int trial = 0; trial < 200; ++trial) {
    IlpInstance inst = random_instance(rng);
    IlpInstance scaled;
    for (const auto& v : inst.variables()) scaled.add_variable(v.name, v.lower, v.upper);
    for (auto c : inst.constraints()) {
      const int f = factor(rng);
      for (auto& t : c.terms) t.coef *= f;
      c.rhs *= f;
      scaled.add_constraint(c);
    }
    scaled.set_objective(*inst.objective());
    EXPECT_EQ(solve_feasibility(inst).status, solve_feasibility(scaled).status);
    IlpResult a = solve_min(inst), b = solve_min(scaled);
    EXPECT_EQ(a.status, b.status);
    if (a.status == IlpStatus::kOptimal) EXPECT_EQ(a.objective_value, b.objective_value);
  }
}

TEST(IlpBudget, Exceeded) {
  // Parity makes this infeasible, but propagation alone cannot see it.
  IlpInstance inst;
  std::vector<IlpTerm> terms;
  for (int i = 0; i < 12; ++i) terms.push_back({inst.add_variable("x" + std::to_string(i), 0, 20), 2});
  inst.add_constraint(terms, Relation::kEqual, 121);
  IlpOptions tight;
  tight.node_budget = 100;
  EXPECT_THROW(solve_feasibility(inst, tight), BudgetExceeded);
}

TEST(IlpInstance, Validation) {
  IlpInstance bad;
  bad.add_variable("x", 0, 1);
  bad.add_constraint({{3, 1}}, Relation::kLessEqual, 0);
  EXPECT_THROW(bad.validate(), InputError);
  EXPECT_THROW(solve_feasibility(bad), InputError);

  IlpInstance inverted;
  inverted.add_variable("x", 2, 1);
  EXPECT_THROW(inverted.validate(), InputError);

  IlpInstance huge;
  std::size_t h = huge.add_variable("x", 0, std::numeric_limits<std::int64_t>::max() / 2);
  huge.add_constraint({{h, 1000}}, Relation::kLessEqual, 5);
  EXPECT_THROW(huge.validate(), InputError);
}

TEST(IlpInstance, Dump) {
  IlpInstance inst;
  std::size_t x = inst.add_variable("x", 0, 4);
  std::size_t y = inst.add_variable("y", -1, 2);
  inst.add_constraint({{x, 2}, {y, -1}}, Relation::kLessEqual, 3);
  inst.add_constraint({{y, 1}}, Relation::kEqual, 1);
  const std::string d = inst.dump();
  EXPECT_NE(d.find("2*x -1*y <= 3"), std::string::npos) << d;
  EXPECT_NE(d.find("1*y = 1"), std::string::npos) << d;
  EXPECT_STREQ(to_string(Relation::kGreaterEqual), ">=");
  EXPECT_STREQ(to_string(IlpStatus::kInfeasible), "infeasible");
}

}  // namespace
}  // namespace cardmso

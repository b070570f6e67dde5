#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cardmso {

struct IlpVariable {
  std::string name;
  std::int64_t lower = 0;
  std::int64_t upper = 0;
};

enum class Relation : std::uint8_t { kLessEqual, kEqual, kGreaterEqual };

struct IlpTerm {
  std::size_t var = 0;
  std::int64_t coef = 0;
};

/// sum(coef * x_var) rel rhs
struct IlpConstraint {
  std::vector<IlpTerm> terms;
  Relation rel = Relation::kLessEqual;
  std::int64_t rhs = 0;
};

/// Integer program over bounded variables. Strict inequalities are not representable;
/// encode a > b as a >= b + 1.
class IlpInstance {
 public:
  std::size_t add_variable(std::string name, std::int64_t lower, std::int64_t upper);
  void add_constraint(IlpConstraint c);
  void add_constraint(std::vector<IlpTerm> terms, Relation rel, std::int64_t rhs);
  /// Objective to minimize.
  void set_objective(std::vector<IlpTerm> terms);

  const std::vector<IlpVariable>& variables() const { return variables_; }
  const std::vector<IlpConstraint>& constraints() const { return constraints_; }
  const std::optional<std::vector<IlpTerm>>& objective() const { return objective_; }
  std::size_t num_variables() const { return variables_.size(); }

  /// Throws InputError on an undeclared variable, lower > upper, or magnitudes large
  /// enough to overflow 64-bit row activities.
  void validate() const;

  bool satisfied_by(const std::vector<std::int64_t>& values) const;
  std::int64_t objective_value(const std::vector<std::int64_t>& values) const;

  /// One line per constraint: `<coef>*<var> ... <rel> <rhs>`.
  std::string dump() const;

 private:
  std::vector<IlpVariable> variables_;
  std::vector<IlpConstraint> constraints_;
  std::optional<std::vector<IlpTerm>> objective_;
};

enum class IlpStatus : std::uint8_t { kFeasible, kInfeasible, kOptimal };

const char* to_string(IlpStatus s);
const char* to_string(Relation r);

struct IlpResult {
  IlpStatus status = IlpStatus::kInfeasible;
  std::vector<std::int64_t> values;  // empty when infeasible
  std::int64_t objective_value = 0;  // meaningful when optimal
  std::uint64_t nodes = 0;
};

inline constexpr std::uint64_t kDefaultIlpNodeBudget = 10'000'000;

struct IlpOptions {
  std::uint64_t node_budget = kDefaultIlpNodeBudget;
};

/// Complete depth-first branch-and-bound with bound propagation. Throws BudgetExceeded
/// when the node budget runs out.
IlpResult solve_feasibility(const IlpInstance& inst, const IlpOptions& options = {});

/// Requires an objective.
IlpResult solve_min(const IlpInstance& inst, const IlpOptions& options = {});

}  // namespace cardmso

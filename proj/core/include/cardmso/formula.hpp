#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace cardmso {

enum class Sort : std::uint8_t { kVertex, kSet };

/// A resolved variable occurrence. `slot` indexes the evaluation environment for the
/// variable's sort; prefix variables occupy set slots 0..m-1.
struct VarRef {
  std::string name;
  Sort sort = Sort::kVertex;
  int slot = -1;

  friend bool operator==(const VarRef&, const VarRef&) = default;
};

enum class NodeKind : std::uint8_t {
  kTrue,
  kFalse,
  kMember,      // vars[0] in vars[1]
  kAdjacent,    // adj(vars[0], vars[1])
  kEqual,       // vars[0] = vars[1], both of one sort
  kNot,
  kAnd,
  kOr,
  kImplies,
  kIff,
  kExists,      // vars[0] bound over children[0]
  kForall,
  kConstraint,  // linear constraint number `constraint`
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind = NodeKind::kTrue;
  VarRef vars[2];
  std::vector<NodePtr> children;
  int constraint = -1;
};

bool structurally_equal(const Node& a, const Node& b);

/// One summand of a cardinality expression.
struct RhoTerm {
  enum class Kind : std::uint8_t { kConstant, kParameter, kCardinality };
  Kind kind = Kind::kConstant;
  std::int64_t value = 0;  // kConstant
  std::string name;        // parameter name (without '$') or set variable name
  int prefix_index = -1;   // kCardinality: index of the prefix variable

  friend bool operator==(const RhoTerm&, const RhoTerm&) = default;
};

using Rho = std::vector<RhoTerm>;

/// [lhs <= rhs]. Equalities and strict inequalities are desugared into these.
struct LinearConstraint {
  Rho lhs;
  Rho rhs;

  friend bool operator==(const LinearConstraint&, const LinearConstraint&) = default;
};

/// A cardMSO sentence `exists Z1 ... Zm . body`.
///
/// The prefix is the maximal leading block of existential set quantifiers; only prefix
/// variables may appear inside linear constraints. `constraints` lists the constraint
/// leaves of `body` in left-to-right order and each kConstraint node refers to its entry.
struct Formula {
  std::vector<std::string> prefix;
  NodePtr body;
  std::vector<LinearConstraint> constraints;
  int vertex_slots = 0;  // environment size for vertex variables
  int set_slots = 0;     // environment size for set variables, prefix included

  std::size_t prefix_size() const { return prefix.size(); }
  /// Parameter names still unbound, sorted.
  std::vector<std::string> parameters() const;
};

struct FormulaStats {
  std::size_t m = 0;    // prefix variables
  std::size_t q_s = 0;  // distinct set variable names in the body, prefix excluded
  std::size_t q_v = 0;  // distinct vertex variable names
  std::size_t constraint_count = 0;

  /// 2^{q_S} * max(q_v, 1): subtype sizes at or above this are interchangeable.
  std::uint64_t small_threshold() const;
  /// 2^{q_S + m} * max(q_v, 1): vertices kept per type in the reduced graph.
  std::uint64_t reduce_threshold() const;
};

/// Truth values for l_1..l_k, one per constraint.
struct PreEvaluation {
  std::vector<bool> values;

  std::size_t size() const { return values.size(); }
  bool operator[](std::size_t i) const { return values[i]; }
  friend bool operator==(const PreEvaluation&, const PreEvaluation&) = default;
};

/// The i-th pre-evaluation in iteration order: a binary counter whose bit j set means
/// constraint j is false, so index 0 is all-true.
PreEvaluation pre_evaluation_at(std::uint64_t index, std::size_t constraint_count);

/// Parses the formula grammar. Throws ParseError with a source position.
Formula parse_formula(std::string_view text);

/// Canonical text form; parse_formula(print_formula(f)) reproduces f's AST.
std::string print_formula(const Formula& f);
std::string print_node(const Formula& f, const Node& n);

FormulaStats analyze(const Formula& f);

/// Replaces every `$name` parameter; constant-folds the affected cardinality expressions.
/// Unknown bindings are reported through `unused` (if non-null) and otherwise ignored.
/// Throws InputError when a parameter has no binding.
Formula substitute_params(const Formula& f, const std::map<std::string, std::int64_t>& bindings,
                          std::vector<std::string>* unused = nullptr);

/// alpha(f): every constraint leaf replaced by its truth value. Throws InputError on a length
/// mismatch.
Formula pre_evaluate(const Formula& f, const PreEvaluation& alpha);

/// The prefix folded back into the body as ordinary existential set quantifiers,
/// giving a plain sentence with an empty prefix. Requires a constraint-free formula.
Formula as_closed_sentence(const Formula& f);

/// Sum of a parameter-free cardinality expression given the prefix set sizes.
std::int64_t evaluate_rho(const Rho& rho, const std::vector<std::int64_t>& prefix_sizes);
bool evaluate_constraint(const LinearConstraint& c, const std::vector<std::int64_t>& prefix_sizes);

}  // namespace cardmso

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "cardmso/formula.hpp"
#include "cardmso/graph.hpp"
#include "cardmso/mso_eval.hpp"

namespace cardmso::detail {

enum class Truth : std::uint8_t { kFalse, kTrue, kUnknown };

enum class ConstraintMode : std::uint8_t {
  kAlpha,    // leaves take the values of a pre-evaluation
  kUnknown,  // leaves are undetermined
  kNumeric,  // leaves are evaluated from the prefix set sizes
  kForbidden,
};

/// Recursive model checker over a single carrier graph.
///
/// Prefix set variables may be partially assigned (each bit known or unknown), in which
/// case evaluation is three-valued (Kleene) and kUnknown means the truth value depends on
/// the unassigned bits. Set variables bound inside the body are always fully assigned.
class Evaluator {
 public:
  Evaluator(const Graph& g, const Formula& f, const MsoOptions& options);

  void set_constraint_mode(ConstraintMode mode, const PreEvaluation* alpha = nullptr);

  /// Forget every prefix bit.
  void clear_prefix();
  void assign_prefix_bit(std::size_t set, Vertex v, bool member);
  void unassign_prefix_bit(std::size_t set, Vertex v);
  void assign_prefix(const PrefixAssignment& chi);
  PrefixAssignment prefix_assignment(PrefixAssignment::Carrier carrier) const;

  Truth evaluate();

  /// While set, set quantifiers evaluate to kUnknown without being expanded. Sound for
  /// pruning, and much cheaper on partial prefix assignments.
  void set_shallow(bool shallow) { shallow_ = shallow; }

  /// Counts one search node against the budget.
  void tick();
  std::uint64_t nodes() const { return nodes_; }
  std::size_t num_vertices() const { return n_; }
  std::size_t prefix_size() const { return m_; }

 private:
  Truth eval(const Node& n);
  Truth eval_quantifier(const Node& n);
  Truth eval_set_block(const Node& n);
  Truth eval_constraint(int index);

  std::uint64_t* value(int slot) { return &set_value_[static_cast<std::size_t>(slot) * words_]; }
  std::uint64_t* known(int slot) { return &set_known_[static_cast<std::size_t>(slot) * words_]; }

  // Symmetry classes of vertices under the current bindings.
  std::vector<std::vector<Vertex>> symmetry_classes();

  const Graph& g_;
  const Formula& f_;
  MsoOptions options_;
  std::size_t n_;
  std::size_t m_;
  std::size_t words_;
  NodePtr body_;  // f's body with constant subformulas folded
  std::vector<std::uint64_t> universe_mask_;
  std::vector<std::uint64_t> set_value_;
  std::vector<std::uint64_t> set_known_;
  std::vector<Vertex> vertex_value_;
  std::vector<int> live_sets_;
  std::vector<int> live_vertices_;
  std::vector<std::vector<Vertex>> twin_groups_;  // twin classes with at least two members
  std::vector<bool> has_twin_;
  bool shallow_ = false;
  ConstraintMode constraint_mode_ = ConstraintMode::kForbidden;
  const PreEvaluation* alpha_ = nullptr;
  std::uint64_t nodes_ = 0;
};

enum class PrefixOrder : std::uint8_t {
  /// Binary counter: Z_1 most significant, within a set vertex n-1 most significant.
  kCounter,
  /// Vertex by vertex from vertex 0, deciding Z_1..Z_m for each in turn.
  kVertexMajor,
};

/// Depth-first enumeration of prefix assignments, pruning subtrees whose partial
/// evaluation is already false. The visitor sees each leaf whose evaluation is not false,
/// with its truth value, and returns false to stop.
///
/// With `interchangeable` set, only one assignment per orbit is visited: the vertices of
/// each listed class must be pairwise swappable by automorphisms the caller does not care
/// about, and the order must be vertex-major.
using LeafVisitor = std::function<bool(Evaluator&, Truth)>;
void enumerate_prefix(Evaluator& eval, const LeafVisitor& visit, PrefixOrder order = PrefixOrder::kCounter,
                      const std::vector<std::vector<Vertex>>* interchangeable = nullptr);

}  // namespace cardmso::detail

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "cardmso/formula.hpp"
#include "cardmso/graph.hpp"
#include "cardmso/vertex_set.hpp"

namespace cardmso {

inline constexpr std::uint64_t kDefaultMsoNodeBudget = 20'000'000'000ULL;

struct MsoOptions {
  /// Quantifiers try one representative per class of interchangeable vertices
  /// (twins with identical memberships in every bound variable). Off means every vertex
  /// is tried on its own.
  bool symmetry = true;
  /// Cap on quantifier branches explored by a single call.
  std::uint64_t node_budget = kDefaultMsoNodeBudget;
};

/// Values of the prefix variables Z_1..Z_m over some carrier graph.
struct PrefixAssignment {
  enum class Carrier : std::uint8_t { kReduced, kFull };

  std::vector<VertexSet> sets;
  Carrier carrier = Carrier::kFull;

  friend bool operator==(const PrefixAssignment&, const PrefixAssignment&) = default;
};

/// Refinement of a type by membership in the prefix sets.
struct Subtype {
  std::size_t type = 0;
  std::uint32_t signature = 0;  // bit i set <=> members lie in Z_{i+1}
  std::vector<Vertex> members;
};

/// All 2^m subtypes of every type (empty ones included), ordered by (type, signature).
std::vector<Subtype> subtypes(const TypePartition& tp, const PrefixAssignment& chi);

std::uint32_t signature_of(const PrefixAssignment& chi, Vertex v);

/// The input graph with each type cut down to its first reduce_threshold() vertices.
///
/// Reduced type t corresponds to original type t; reduced vertices keep the relative order
/// of their originals.
struct ReducedGraph {
  Graph graph;
  TypePartition types;
  std::vector<std::size_t> original_sizes;      // |T| per type
  std::vector<std::vector<Vertex>> kept;        // surviving original vertices per type
  std::vector<std::vector<Vertex>> deleted;     // removed original vertices per type
  std::vector<Vertex> to_original;              // reduced vertex -> original vertex
};

ReducedGraph reduce_graph(const Graph& g, const TypePartition& tp, const FormulaStats& stats);

/// Exact truth of g |= f by recursive descent; the prefix (if any) is existential.
/// f must be free of linear constraints. Throws BudgetExceeded past the node budget.
bool mso_check(const Graph& g, const Formula& f, const MsoOptions& options = {});

/// Truth of the body of f under a fixed prefix assignment over g, evaluating any linear
/// constraints numerically from the prefix set sizes.
bool holds_under(const Graph& g, const Formula& f, const PrefixAssignment& chi,
                 const MsoOptions& options = {});

/// Truth values of f's constraints under chi.
PreEvaluation constraint_values(const Formula& f, const PrefixAssignment& chi);

/// Streams every prefix assignment chi over `carrier` with carrier |=_chi body, each exactly
/// once, ordered as a binary counter (Z_1 outermost, vertex index order within a set). The
/// visitor returns false to stop early. `body` must be free of linear constraints.
using PrefixVisitor = std::function<bool(const PrefixAssignment&)>;
void satisfying_prefix_assignments(const Graph& carrier, const Formula& body,
                                   const PrefixVisitor& visit, const MsoOptions& options = {});
void satisfying_prefix_assignments(const ReducedGraph& rg, const Formula& body,
                                   const PrefixVisitor& visit, const MsoOptions& options = {});

}  // namespace cardmso

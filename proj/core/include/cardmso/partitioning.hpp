#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "cardmso/formula.hpp"
#include "cardmso/graph.hpp"
#include "cardmso/ilp.hpp"
#include "cardmso/mso_eval.hpp"

namespace cardmso {

/// Per type, how many vertices of that type a set contains: an exact count, or kTop for
/// "more than the small threshold".
struct Shape {
  static constexpr std::int64_t kTop = -1;
  std::vector<std::int64_t> per_type;

  bool is_top(std::size_t t) const { return per_type[t] == kTop; }
  bool is_empty() const;
  friend bool operator==(const Shape&, const Shape&) = default;
};

inline constexpr std::uint64_t kDefaultShapeBudget = 1'000'000;

/// All shapes, as a mixed-radix counter with type 0 varying fastest. Options per type are
/// 0..min(|T|, small) followed by kTop when |T| > small. Throws BudgetExceeded past `budget`.
std::vector<Shape> enumerate_shapes(const TypePartition& tp, const FormulaStats& stats,
                                    std::uint64_t budget = kDefaultShapeBudget);

/// Upper bound on the number of shapes: prod over types of (min(|T|, small) + 1 + [|T| > small]).
std::uint64_t shape_count_bound(const TypePartition& tp, const FormulaStats& stats);

/// A vertex set of shape s: kTop entries take small + 1 vertices. Variant 0 takes the first
/// vertices of each type, other variants rotate the choice within the type.
VertexSet shape_representative(const TypePartition& tp, const Shape& s, const FormulaStats& stats,
                               std::size_t variant = 0);

/// Whether the subgraph induced by a representative of s models phi.
bool shape_satisfies(const Graph& g, const TypePartition& tp, const Shape& s, const Formula& phi,
                     const FormulaStats& stats, const MsoOptions& options = {});

struct PartitionOptions {
  PartitionMode mode = PartitionMode::kVertexCover;
  std::size_t k_max = kDefaultKMax;
  bool allow_empty = true;
  std::size_t threads = 1;
  std::uint64_t shape_budget = kDefaultShapeBudget;
  MsoOptions mso;
  IlpOptions ilp;
  std::function<void(const IlpInstance&, const IlpResult&)> on_ilp;
};

struct PartitionStats {
  std::size_t types = 0;
  std::size_t cover_size = 0;
  std::size_t shapes = 0;
  std::size_t satisfying_shapes = 0;
  std::uint64_t ilp_nodes = 0;
  double elapsed_seconds = 0;
};

struct PartitionResult {
  bool holds = false;
  std::vector<VertexSet> parts;  // r sets when holds
  PartitionStats stats;
};

/// Can V(g) be split into r sets (ordered by their shapes) each inducing a model of phi?
/// phi must be free of linear constraints; a leading existential block counts as part of it.
PartitionResult mso_partition(const Graph& g, const Formula& phi, std::size_t r,
                              const PartitionOptions& options = {});

}  // namespace cardmso

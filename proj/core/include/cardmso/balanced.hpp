#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "cardmso/cardmso_solver.hpp"
#include "cardmso/formula.hpp"
#include "cardmso/graph.hpp"

namespace cardmso {

/// exists X1..Xc: every vertex in exactly one Xi, and every pair of sizes differs by at
/// most one. Variables are named A, B, C, ... for c <= 26. With allow_empty false each
/// Xi must also be nonempty.
Formula generate_equitable_formula(std::size_t c, bool allow_empty = true);
std::string equitable_formula_text(std::size_t c, bool allow_empty = true);

struct BalancedOptions {
  std::size_t k_max = kDefaultKMax;
  bool allow_empty = true;
  Strategy strategy = Strategy::kAssignmentFirst;
  bool dedup = true;
  MsoOptions mso;
  IlpOptions ilp;
  std::function<void(const IlpInstance&, const IlpResult&)> on_ilp;
};

struct BalancedResult {
  bool feasible = false;  // false only when no equitable c-partition exists
  std::int64_t cut_value = 0;
  std::vector<VertexSet> parts;
  CheckStats stats;
};

/// Number of edges whose endpoints lie in different parts. Vertices outside every part
/// count as their own part.
std::int64_t cut_size(const Graph& g, const std::vector<VertexSet>& parts);

/// Cut edges split by where their cover endpoint sits. `base` counts cover-cover edges
/// across parts of chi; per_subtype[t * 2^|chi| + s] is how many cover neighbours of a type-t
/// vertex with signature s lie in a different part (zero for cover types). Only cover
/// vertices of chi are read.
struct CutConstants {
  std::int64_t base = 0;
  std::vector<std::int64_t> per_subtype;
};
CutConstants cut_constants(const Graph& h, const TypePartition& types, const PrefixAssignment& chi);

/// Minimum number of cut edges over equitable c-partitions of V(g), parameterized by the
/// vertex cover. Throws CoverExceedsBudget when the cover exceeds k_max.
BalancedResult cbalanced(const Graph& g, std::size_t c, const BalancedOptions& options = {});

}  // namespace cardmso

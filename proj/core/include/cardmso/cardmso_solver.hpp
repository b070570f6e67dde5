#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "cardmso/formula.hpp"
#include "cardmso/graph.hpp"
#include "cardmso/ilp.hpp"
#include "cardmso/mso_eval.hpp"

namespace cardmso {

/// The integer program deciding whether chi_phi on the reduced graph extends to the
/// full graph while every constraint takes the value alpha gives it.
///
/// Variable t * 2^m + s counts the vertices of type t with prefix signature s.
struct ExtensionIlp {
  IlpInstance ilp;
  std::size_t prefix_size = 0;
  std::vector<std::size_t> reduced_counts;  // |S_phi| per variable
};

ExtensionIlp build_extension_ilp(const ReducedGraph& rg, const PrefixAssignment& chi_phi,
                                 const PreEvaluation& alpha, const Formula& f,
                                 const FormulaStats& stats);

/// Lifts chi_phi to the full graph. Kept vertices keep their memberships; deleted vertices of
/// each type are handed out in index order, subtypes in signature order, until every
/// subtype reaches its count. Throws InternalError if the counts do not fit.
PrefixAssignment extract_witness(const PrefixAssignment& chi_phi,
                                 const std::vector<std::int64_t>& counts, const ReducedGraph& rg);

enum class Strategy : std::uint8_t {
  /// Enumerate prefix assignments once with constraints left open, then try only the
  /// pre-evaluations the assignment's possible extensions can realise.
  kAssignmentFirst,
  /// Outer loop over all 2^k pre-evaluations, inner loop over satisfying assignments.
  kPreEvaluationFirst,
};

struct CheckOptions {
  PartitionMode mode = PartitionMode::kVertexCover;
  std::size_t k_max = kDefaultKMax;
  Strategy strategy = Strategy::kAssignmentFirst;
  /// Solve one ILP per (alpha, subtype cardinalities) pair only.
  bool dedup = true;
  MsoOptions mso;
  IlpOptions ilp;
  /// Called after every ILP solve.
  std::function<void(const IlpInstance&, const IlpResult&)> on_ilp;
};

struct CheckStats {
  std::size_t types = 0;
  std::size_t cover_size = 0;  // vertex-cover mode only
  std::size_t reduced_vertices = 0;
  std::uint64_t pre_evaluations_tried = 0;
  std::uint64_t prefix_assignments = 0;
  std::uint64_t ilp_solves = 0;
  std::uint64_t dedup_skips = 0;
  double elapsed_seconds = 0;
};

struct Witness {
  PrefixAssignment chi;  // over the full graph
  PreEvaluation alpha;
};

struct Verdict {
  bool holds = false;
  std::optional<Witness> witness;
  CheckStats stats;
};

/// Decides g |= f. f must be parameter-free. Throws CoverExceedsBudget in vertex-cover
/// mode when no cover of size k_max exists, BudgetExceeded from the inner engines.
Verdict check(const Graph& g, const Formula& f, const CheckOptions& options = {});

/// g |=_chi f with every constraint taking the value alpha assigns to it.
bool validate_witness(const Graph& g, const Formula& f, const Witness& w);

}  // namespace cardmso

#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <utility>
#include <vector>

#include "cardmso/cardmso_solver.hpp"

namespace cardmso::detail {

/// Returns true to stop the stream.
using WorkItemHandler =
    std::function<bool(const PrefixAssignment& chi_phi, std::uint64_t alpha_index, const PreEvaluation& alpha)>;

/// Streams the (pre-evaluation, prefix assignment) pairs with reduced graph |=_{chi_phi}
/// alpha(body), in the order of the configured strategy. With dedup on, a pair whose
/// extension ILP would repeat an earlier one is skipped.
class WorkItems {
 public:
  WorkItems(const Graph& g, const Formula& f, const CheckOptions& options);

  void run(const WorkItemHandler& handle);

  const ReducedGraph& reduced() const { return rg_; }
  const FormulaStats& formula_stats() const { return stats_; }
  CheckStats& counters() { return counters_; }

 private:
  using Key = std::pair<std::uint64_t, std::vector<std::size_t>>;

  bool offer(const PrefixAssignment& chi_phi, std::uint64_t alpha_index, const PreEvaluation& alpha);
  void pre_evaluation_first();
  void assignment_first();
  bool cardinality_ranges(const PrefixAssignment& chi_phi, std::vector<std::int64_t>& lo,
                          std::vector<std::int64_t>& hi) const;

  const Formula& f_;
  const CheckOptions& options_;
  FormulaStats stats_;
  ReducedGraph rg_;
  CheckStats counters_;
  std::set<Key> seen_;
  const WorkItemHandler* handle_ = nullptr;
};

}  // namespace cardmso::detail

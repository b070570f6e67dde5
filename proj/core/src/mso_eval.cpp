#include "cardmso/mso_eval.hpp"

#include <algorithm>

#include "cardmso/errors.hpp"
#include "evaluator.hpp"

namespace cardmso {

using detail::ConstraintMode;
using detail::Evaluator;
using detail::Truth;

std::uint32_t signature_of(const PrefixAssignment& chi, Vertex v) {
  std::uint32_t sig = 0;
  for (std::size_t i = 0; i < chi.sets.size(); ++i)
    if (chi.sets[i].contains(v)) sig |= std::uint32_t{1} << i;
  return sig;
}

std::vector<Subtype> subtypes(const TypePartition& tp, const PrefixAssignment& chi) {
  const std::size_t m = chi.sets.size();
  if (m >= 31) throw InputError("too many prefix variables");
  const std::uint32_t signatures = std::uint32_t{1} << m;
  std::vector<Subtype> out;
  out.reserve(tp.num_types() * signatures);
  for (std::size_t t = 0; t < tp.num_types(); ++t) {
    const std::size_t base = out.size();
    for (std::uint32_t s = 0; s < signatures; ++s) out.push_back({t, s, {}});
    for (Vertex v : tp.types[t]) out[base + signature_of(chi, v)].members.push_back(v);
  }
  return out;
}

ReducedGraph reduce_graph(const Graph& g, const TypePartition& tp, const FormulaStats& stats) {
  const std::uint64_t keep_per_type = stats.reduce_threshold();
  ReducedGraph rg;
  std::vector<Vertex> keep;
  for (const auto& type : tp.types) {
    rg.original_sizes.push_back(type.size());
    const std::size_t count = static_cast<std::size_t>(std::min<std::uint64_t>(type.size(), keep_per_type));
    rg.kept.emplace_back(type.begin(), type.begin() + static_cast<std::ptrdiff_t>(count));
    rg.deleted.emplace_back(type.begin() + static_cast<std::ptrdiff_t>(count), type.end());
    keep.insert(keep.end(), rg.kept.back().begin(), rg.kept.back().end());
  }
  std::sort(keep.begin(), keep.end());
  rg.to_original = keep;
  rg.graph = g.induced_subgraph(keep);

  std::vector<Vertex> to_reduced(g.num_vertices(), 0);
  for (std::size_t i = 0; i < keep.size(); ++i) to_reduced[keep[i]] = static_cast<Vertex>(i);
  rg.types.mode = tp.mode;
  rg.types.cover_types = tp.cover_types;
  rg.types.type_of.assign(keep.size(), 0);
  for (std::size_t t = 0; t < rg.kept.size(); ++t) {
    std::vector<Vertex> members;
    for (Vertex v : rg.kept[t]) {
      members.push_back(to_reduced[v]);
      rg.types.type_of[to_reduced[v]] = t;
    }
    rg.types.types.push_back(std::move(members));
  }
  return rg;
}

bool mso_check(const Graph& g, const Formula& f, const MsoOptions& options) {
  const Formula sentence = as_closed_sentence(f);
  Evaluator eval(g, sentence, options);
  return eval.evaluate() == Truth::kTrue;
}

bool holds_under(const Graph& g, const Formula& f, const PrefixAssignment& chi,
                 const MsoOptions& options) {
  Evaluator eval(g, f, options);
  eval.set_constraint_mode(ConstraintMode::kNumeric);
  eval.assign_prefix(chi);
  const Truth t = eval.evaluate();
  if (t == Truth::kUnknown) throw InternalError("fully assigned prefix evaluated to unknown");
  return t == Truth::kTrue;
}

PreEvaluation constraint_values(const Formula& f, const PrefixAssignment& chi) {
  std::vector<std::int64_t> sizes;
  for (const auto& s : chi.sets) sizes.push_back(static_cast<std::int64_t>(s.size()));
  PreEvaluation alpha;
  for (const auto& c : f.constraints) alpha.values.push_back(evaluate_constraint(c, sizes));
  return alpha;
}

void satisfying_prefix_assignments(const Graph& carrier, const Formula& body,
                                   const PrefixVisitor& visit, const MsoOptions& options) {
  if (!body.constraints.empty())
    throw InputError("body still contains linear constraints; pre-evaluate it first");
  Evaluator eval(carrier, body, options);
  detail::enumerate_prefix(eval, [&](Evaluator& e, Truth t) {
    if (t != Truth::kTrue) throw InternalError("complete prefix assignment evaluated to unknown");
    return visit(e.prefix_assignment(PrefixAssignment::Carrier::kReduced));
  });
}

void satisfying_prefix_assignments(const ReducedGraph& rg, const Formula& body,
                                   const PrefixVisitor& visit, const MsoOptions& options) {
  satisfying_prefix_assignments(rg.graph, body, visit, options);
}

}  // namespace cardmso

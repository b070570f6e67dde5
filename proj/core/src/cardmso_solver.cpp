#include "cardmso/cardmso_solver.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <string>
#include <utility>

#include "cardmso/errors.hpp"
#include "evaluator.hpp"
#include "work_items.hpp"

namespace cardmso {

using detail::ConstraintMode;
using detail::Evaluator;
using detail::Truth;

namespace {

std::string variable_name(std::size_t type, std::uint32_t signature, std::size_t m) {
  std::string name = "x_" + std::to_string(type) + "_";
  for (std::size_t i = 0; i < m; ++i) name += ((signature >> i) & 1U) ? '1' : '0';
  if (m == 0) name += '-';
  return name;
}

// Coefficient per prefix variable plus a constant, for lhs - rhs of a constraint.
struct Difference {
  std::vector<std::int64_t> coef;
  std::int64_t constant = 0;
};

Difference difference(const LinearConstraint& c, std::size_t m) {
  Difference d;
  d.coef.assign(m, 0);
  auto add = [&](const Rho& rho, std::int64_t sign) {
    for (const auto& t : rho) {
      switch (t.kind) {
        case RhoTerm::Kind::kConstant: d.constant += sign * t.value; break;
        case RhoTerm::Kind::kCardinality: d.coef[static_cast<std::size_t>(t.prefix_index)] += sign; break;
        case RhoTerm::Kind::kParameter: throw InputError("unbound parameter $" + t.name);
      }
    }
  };
  add(c.lhs, 1);
  add(c.rhs, -1);
  return d;
}

}  // namespace

ExtensionIlp build_extension_ilp(const ReducedGraph& rg, const PrefixAssignment& chi_phi,
                                 const PreEvaluation& alpha, const Formula& f,
                                 const FormulaStats& stats) {
  const std::size_t m = f.prefix_size();
  if (chi_phi.sets.size() != m) throw InputError("prefix assignment does not match the formula");
  if (alpha.size() != f.constraints.size()) throw InputError("pre-evaluation does not match the formula");
  const std::uint64_t small = stats.small_threshold();
  const auto subs = subtypes(rg.types, chi_phi);

  ExtensionIlp out;
  out.prefix_size = m;
  for (const auto& s : subs) {
    const auto total = static_cast<std::int64_t>(rg.original_sizes[s.type]);
    out.ilp.add_variable(variable_name(s.type, s.signature, m), 0, total);
    out.reduced_counts.push_back(s.members.size());
  }

  const std::size_t per_type = std::size_t{1} << m;
  for (std::size_t t = 0; t < rg.types.num_types(); ++t) {
    std::vector<IlpTerm> row;
    for (std::size_t s = 0; s < per_type; ++s) row.push_back({t * per_type + s, 1});
    out.ilp.add_constraint(std::move(row), Relation::kEqual, static_cast<std::int64_t>(rg.original_sizes[t]));
  }

  // Small subtypes are pinned. A subtype already of size `small` can absorb any number of
  // deleted vertices without changing the truth of the body, so it only gets a lower bound.
  for (std::size_t i = 0; i < subs.size(); ++i) {
    const auto size = static_cast<std::int64_t>(subs[i].members.size());
    const bool pinned = subs[i].members.size() < small;
    out.ilp.add_constraint({{i, 1}}, pinned ? Relation::kEqual : Relation::kGreaterEqual, size);
  }

  for (std::size_t c = 0; c < f.constraints.size(); ++c) {
    const Difference d = difference(f.constraints[c], m);
    std::vector<IlpTerm> row;
    for (std::size_t i = 0; i < subs.size(); ++i) {
      std::int64_t coef = 0;
      for (std::size_t z = 0; z < m; ++z)
        if ((subs[i].signature >> z) & 1U) coef += d.coef[z];
      if (coef != 0) row.push_back({i, coef});
    }
    if (alpha[c])
      out.ilp.add_constraint(std::move(row), Relation::kLessEqual, -d.constant);
    else
      out.ilp.add_constraint(std::move(row), Relation::kGreaterEqual, -d.constant + 1);
  }
  return out;
}

PrefixAssignment extract_witness(const PrefixAssignment& chi_phi,
                                 const std::vector<std::int64_t>& counts, const ReducedGraph& rg) {
  const std::size_t m = chi_phi.sets.size();
  const std::size_t per_type = std::size_t{1} << m;
  if (counts.size() != rg.types.num_types() * per_type)
    throw InternalError("ILP assignment has the wrong number of variables");
  std::size_t n = 0;
  for (std::size_t s : rg.original_sizes) n += s;

  PrefixAssignment chi;
  chi.carrier = PrefixAssignment::Carrier::kFull;
  chi.sets.assign(m, VertexSet(n));
  for (Vertex r = 0; r < rg.to_original.size(); ++r)
    for (std::size_t z = 0; z < m; ++z)
      if (chi_phi.sets[z].contains(r)) chi.sets[z].insert(rg.to_original[r]);

  const auto subs = subtypes(rg.types, chi_phi);
  std::vector<std::size_t> next(rg.types.num_types(), 0);
  for (std::size_t i = 0; i < subs.size(); ++i) {
    const auto have = static_cast<std::int64_t>(subs[i].members.size());
    if (counts[i] < have) throw InternalError("ILP count below the reduced subtype size");
    const auto& pool = rg.deleted[subs[i].type];
    std::size_t& at = next[subs[i].type];
    for (std::int64_t k = have; k < counts[i]; ++k) {
      if (at >= pool.size()) throw InternalError("ILP counts exceed the size of a type");
      const Vertex v = pool[at++];
      for (std::size_t z = 0; z < m; ++z)
        if ((subs[i].signature >> z) & 1U) chi.sets[z].insert(v);
    }
  }
  for (std::size_t t = 0; t < next.size(); ++t)
    if (next[t] != rg.deleted[t].size()) throw InternalError("ILP counts leave deleted vertices unassigned");
  return chi;
}

namespace detail {

namespace {

constexpr std::size_t kMaxConstraints = 62;
constexpr std::size_t kMaxPrefix = 16;

}  // namespace

WorkItems::WorkItems(const Graph& g, const Formula& f, const CheckOptions& options)
    : f_(f), options_(options), stats_(analyze(f)) {
  if (!f.parameters().empty()) throw InputError("formula has unbound parameter $" + f.parameters().front());
  if (f.constraints.size() > kMaxConstraints)
    throw InputError("formula has more than " + std::to_string(kMaxConstraints) + " linear constraints");
  if (f.prefix_size() > kMaxPrefix)
    throw InputError("formula has more than " + std::to_string(kMaxPrefix) + " prefix variables");
  TypePartition tp;
  if (options.mode == PartitionMode::kVertexCover) {
    const VertexCover cover = min_vertex_cover(g, options.k_max);
    counters_.cover_size = cover.size;
    tp = type_partition(g, cover);
  } else {
    tp = nd_partition(g);
  }
  counters_.types = tp.num_types();
  rg_ = reduce_graph(g, tp, stats_);
  counters_.reduced_vertices = rg_.graph.num_vertices();
}

void WorkItems::run(const WorkItemHandler& handle) {
  handle_ = &handle;
  if (options_.strategy == Strategy::kAssignmentFirst)
    assignment_first();
  else
    pre_evaluation_first();
  handle_ = nullptr;
}

bool WorkItems::offer(const PrefixAssignment& chi_phi, std::uint64_t alpha_index, const PreEvaluation& alpha) {
  if (options_.dedup) {
    Key key{alpha_index, {}};
    for (const auto& s : subtypes(rg_.types, chi_phi)) key.second.push_back(s.members.size());
    if (!seen_.insert(std::move(key)).second) {
      ++counters_.dedup_skips;
      return false;
    }
  }
  return (*handle_)(chi_phi, alpha_index, alpha);
}

void WorkItems::pre_evaluation_first() {
  const std::size_t k = f_.constraints.size();
  const std::uint64_t count = std::uint64_t{1} << k;
  for (std::uint64_t index = 0; index < count; ++index) {
    ++counters_.pre_evaluations_tried;
    const PreEvaluation alpha = pre_evaluation_at(index, k);
    const Formula body = pre_evaluate(f_, alpha);
    bool stop = false;
    satisfying_prefix_assignments(rg_, body, [&](const PrefixAssignment& chi_phi) {
      ++counters_.prefix_assignments;
      stop = offer(chi_phi, index, alpha);
      return !stop;
    }, options_.mso);
    if (stop) return;
  }
}

// Range of |Z_z| over all extensions allowed by the type sums and the pins. Returns false
// when no extension exists at all.
bool WorkItems::cardinality_ranges(const PrefixAssignment& chi_phi, std::vector<std::int64_t>& lo,
                                   std::vector<std::int64_t>& hi) const {
  const std::size_t m = f_.prefix_size();
  const std::uint64_t small = stats_.small_threshold();
  const std::size_t per_type = std::size_t{1} << m;
  const auto subs = subtypes(rg_.types, chi_phi);
  lo.assign(m, 0);
  hi.assign(m, 0);
  for (std::size_t t = 0; t < rg_.types.num_types(); ++t) {
    const auto extra = static_cast<std::int64_t>(rg_.deleted[t].size());
    std::vector<bool> free_in(m, false), free_out(m, false);
    bool any_free = false;
    for (std::size_t s = 0; s < per_type; ++s) {
      const Subtype& sub = subs[t * per_type + s];
      const bool is_free = sub.members.size() >= small;
      any_free = any_free || is_free;
      for (std::size_t z = 0; z < m; ++z) {
        const bool in = (sub.signature >> z) & 1U;
        if (in) {
          lo[z] += static_cast<std::int64_t>(sub.members.size());
          hi[z] += static_cast<std::int64_t>(sub.members.size());
        }
        if (is_free) (in ? free_in : free_out)[z] = true;
      }
    }
    if (extra == 0) continue;
    if (!any_free) return false;
    for (std::size_t z = 0; z < m; ++z) {
      if (!free_out[z]) lo[z] += extra;
      if (free_in[z]) hi[z] += extra;
    }
  }
  return true;
}

void WorkItems::assignment_first() {
  const std::size_t k = f_.constraints.size();
  std::vector<Difference> diffs;
  for (const auto& c : f_.constraints) diffs.push_back(difference(c, f_.prefix_size()));

  Evaluator exact(rg_.graph, f_, options_.mso);
  Evaluator walker(rg_.graph, f_, options_.mso);
  walker.set_constraint_mode(ConstraintMode::kUnknown);
  std::set<std::uint64_t> alphas_seen;

  // Members of one type are twins in both graphs and give equal subtype counts, so one
  // assignment per relabelling of a type is enough.
  std::vector<std::vector<Vertex>> interchangeable;
  if (options_.mso.symmetry)
    for (const auto& type : rg_.types.types)
      if (type.size() > 1) interchangeable.push_back(type);

  enumerate_prefix(walker, [&](Evaluator& e, Truth leaf) {
    ++counters_.prefix_assignments;
    const PrefixAssignment chi_phi = e.prefix_assignment(PrefixAssignment::Carrier::kReduced);
    std::vector<std::int64_t> lo, hi;
    if (!cardinality_ranges(chi_phi, lo, hi)) return true;

    // A constraint with the same value under every extension is fixed; the rest stay open.
    std::uint64_t fixed_false = 0;
    std::uint64_t open = 0;
    for (std::size_t c = 0; c < k; ++c) {
      std::int64_t dmin = diffs[c].constant, dmax = diffs[c].constant;
      for (std::size_t z = 0; z < lo.size(); ++z) {
        const std::int64_t a = diffs[c].coef[z];
        dmin += a > 0 ? a * lo[z] : a * hi[z];
        dmax += a > 0 ? a * hi[z] : a * lo[z];
      }
      if (dmin > 0)
        fixed_false |= std::uint64_t{1} << c;
      else if (dmax > 0)
        open |= std::uint64_t{1} << c;
    }

    exact.assign_prefix(chi_phi);
    std::uint64_t sub = 0;
    while (true) {
      const std::uint64_t index = fixed_false | sub;
      const PreEvaluation alpha = pre_evaluation_at(index, k);
      if (alphas_seen.insert(index).second) ++counters_.pre_evaluations_tried;
      bool body_true = leaf == Truth::kTrue;
      if (!body_true) {
        exact.set_constraint_mode(ConstraintMode::kAlpha, &alpha);
        body_true = exact.evaluate() == Truth::kTrue;
      }
      if (body_true && offer(chi_phi, index, alpha)) return false;
      if (sub == open) break;
      sub = (sub - open) & open;  // next submask of `open` in increasing order
    }
    return true;
  }, PrefixOrder::kVertexMajor, options_.mso.symmetry ? &interchangeable : nullptr);
}

}  // namespace detail

Verdict check(const Graph& g, const Formula& f, const CheckOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  detail::WorkItems items(g, f, options);
  Verdict verdict;
  items.run([&](const PrefixAssignment& chi_phi, std::uint64_t, const PreEvaluation& alpha) {
    ExtensionIlp ext = build_extension_ilp(items.reduced(), chi_phi, alpha, f, items.formula_stats());
    ++items.counters().ilp_solves;
    const IlpResult r = solve_feasibility(ext.ilp, options.ilp);
    if (options.on_ilp) options.on_ilp(ext.ilp, r);
    if (r.status == IlpStatus::kInfeasible) return false;
    verdict.holds = true;
    verdict.witness = Witness{extract_witness(chi_phi, r.values, items.reduced()), alpha};
    return true;
  });
  verdict.stats = items.counters();
  verdict.stats.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return verdict;
}

bool validate_witness(const Graph& g, const Formula& f, const Witness& w) {
  if (w.chi.sets.size() != f.prefix_size() || w.alpha.size() != f.constraints.size()) return false;
  for (const auto& s : w.chi.sets)
    if (s.universe() != g.num_vertices()) return false;
  if (!(constraint_values(f, w.chi) == w.alpha)) return false;
  MsoOptions mso;
  mso.symmetry = true;
  return holds_under(g, f, w.chi, mso);
}

}  // namespace cardmso

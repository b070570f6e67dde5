#include "cardmso/balanced.hpp"

#include <chrono>

#include "cardmso/errors.hpp"
#include "work_items.hpp"

namespace cardmso {

namespace {

std::string set_name(std::size_t i, std::size_t c) {
  if (c <= 26) return std::string(1, static_cast<char>('A' + i));
  return "X" + std::to_string(i + 1);
}

}  // namespace

std::string equitable_formula_text(std::size_t c, bool allow_empty) {
  if (c == 0) throw InputError("number of parts must be at least 1");
  std::vector<std::string> x;
  for (std::size_t i = 0; i < c; ++i) x.push_back(set_name(i, c));

  std::string text = "exists ";
  for (std::size_t i = 0; i < c; ++i) text += (i ? ", " : "") + x[i];
  text += ". ";

  std::string member;
  if (c == 1) {
    member = "v in " + x[0];
  } else {
    member = "(";
    for (std::size_t i = 0; i < c; ++i) member += (i ? " or " : "") + ("v in " + x[i]);
    member += ")";
    for (std::size_t i = 0; i < c; ++i)
      for (std::size_t j = i + 1; j < c; ++j) member += " and not (v in " + x[i] + " and v in " + x[j] + ")";
  }
  text += "(forall v. " + member + ")";

  for (std::size_t i = 0; i < c; ++i)
    for (std::size_t j = i + 1; j < c; ++j) {
      const std::string& t = x[i];
      const std::string& u = x[j];
      text += "\n  and ([|" + t + "| = |" + u + "| + 1] or [|" + t + "| + 1 = |" + u + "|] or [|" + t + "| = |" + u + "|])";
    }
  if (!allow_empty)
    for (std::size_t i = 0; i < c; ++i) text += "\n  and [1 <= |" + x[i] + "|]";
  return text + "\n";
}

Formula generate_equitable_formula(std::size_t c, bool allow_empty) {
  return parse_formula(equitable_formula_text(c, allow_empty));
}

std::int64_t cut_size(const Graph& g, const std::vector<VertexSet>& parts) {
  std::vector<std::size_t> part_of(g.num_vertices(), parts.size());
  for (std::size_t p = 0; p < parts.size(); ++p)
    for (Vertex v : parts[p].members()) part_of[v] = p;
  std::int64_t cut = 0;
  for (const auto& [u, v] : g.edges())
    if (part_of[u] != part_of[v] || part_of[u] == parts.size()) ++cut;
  return cut;
}

CutConstants cut_constants(const Graph& h, const TypePartition& types, const PrefixAssignment& chi) {
  // Every edge has an endpoint in the cover: cover-cover edges are fixed by chi, the
  // others are charged to the subtype of their non-cover endpoint.
  const std::size_t per_type = std::size_t{1} << chi.sets.size();
  CutConstants k;
  k.per_subtype.assign(types.num_types() * per_type, 0);
  for (std::size_t a = 0; a < types.cover_types.size(); ++a)
    for (std::size_t b = a + 1; b < types.cover_types.size(); ++b) {
      const Vertex u = types.types[types.cover_types[a]].front();
      const Vertex v = types.types[types.cover_types[b]].front();
      if (h.adjacent(u, v) && signature_of(chi, u) != signature_of(chi, v)) ++k.base;
    }
  for (std::size_t t = 0; t < types.num_types(); ++t) {
    if (types.is_cover_type(t)) continue;
    const Vertex rep = types.types[t].front();
    for (std::size_t s = 0; s < per_type; ++s)
      for (Vertex w : h.neighbors(rep))
        if (signature_of(chi, w) != s) ++k.per_subtype[t * per_type + s];
  }
  return k;
}

BalancedResult cbalanced(const Graph& g, std::size_t c, const BalancedOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const Formula f = generate_equitable_formula(c, options.allow_empty);
  CheckOptions check_options;
  check_options.mode = PartitionMode::kVertexCover;
  check_options.k_max = options.k_max;
  check_options.strategy = options.strategy;
  check_options.dedup = options.dedup;
  check_options.mso = options.mso;
  detail::WorkItems items(g, f, check_options);
  const ReducedGraph& rg = items.reduced();
  const Graph& h = rg.graph;
  const auto edges = static_cast<std::int64_t>(g.num_edges());

  BalancedResult result;
  items.run([&](const PrefixAssignment& chi_phi, std::uint64_t, const PreEvaluation& alpha) {
    ExtensionIlp ext = build_extension_ilp(rg, chi_phi, alpha, f, items.formula_stats());
    const std::size_t num_subtypes = ext.ilp.num_variables();

    const CutConstants k = cut_constants(h, rg.types, chi_phi);
    std::vector<IlpTerm> beta_row;
    for (std::size_t i = 0; i < k.per_subtype.size(); ++i)
      if (k.per_subtype[i] != 0) beta_row.push_back({i, -k.per_subtype[i]});
    // Ties keep the earlier work item, so only strict improvements are of interest.
    const std::int64_t upper = result.feasible ? result.cut_value - 1 : edges;
    const std::size_t beta = ext.ilp.add_variable("beta", 0, upper);
    beta_row.push_back({beta, 1});
    ext.ilp.add_constraint(std::move(beta_row), Relation::kEqual, k.base);
    ext.ilp.set_objective({{beta, 1}});

    ++items.counters().ilp_solves;
    const IlpResult r = solve_min(ext.ilp, options.ilp);
    if (options.on_ilp) options.on_ilp(ext.ilp, r);
    if (r.status == IlpStatus::kInfeasible) return false;
    std::vector<std::int64_t> counts(r.values.begin(), r.values.begin() + static_cast<std::ptrdiff_t>(num_subtypes));
    PrefixAssignment chi = extract_witness(chi_phi, counts, rg);
    result.feasible = true;
    result.cut_value = r.objective_value;
    result.parts = std::move(chi.sets);
    return result.cut_value == 0;
  });

  if (result.feasible && cut_size(g, result.parts) != result.cut_value)
    throw InternalError("cut value does not match the returned partition");
  result.stats = items.counters();
  result.stats.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace cardmso

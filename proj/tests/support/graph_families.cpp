#include "graph_families.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace cardmso::testing {

namespace {

using Code = std::uint64_t;

// Upper-triangle adjacency bits under `perm` (perm[i] = original vertex at position i).
Code encode(const Graph& g, const std::vector<Vertex>& perm) {
  Code code = 0;
  const std::size_t n = perm.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) code = (code << 1) | (g.adjacent(perm[i], perm[j]) ? 1U : 0U);
  return code;
}

// Largest code over permutations listing vertices by non-increasing degree.
Code canonical_code(const Graph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<Vertex> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](Vertex a, Vertex b) {
    return g.degree(a) != g.degree(b) ? g.degree(a) > g.degree(b) : a < b;
  });
  // Permute within blocks of equal degree only: step through each block's permutations
  // as an odometer.
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && g.degree(perm[j]) == g.degree(perm[i])) ++j;
    blocks.emplace_back(i, j);
    i = j;
  }
  for (auto [b, e] : blocks) std::sort(perm.begin() + static_cast<std::ptrdiff_t>(b), perm.begin() + static_cast<std::ptrdiff_t>(e));
  Code best = 0;
  while (true) {
    best = std::max(best, encode(g, perm));
    std::size_t k = 0;
    for (; k < blocks.size(); ++k) {
      auto [b, e] = blocks[k];
      if (std::next_permutation(perm.begin() + static_cast<std::ptrdiff_t>(b), perm.begin() + static_cast<std::ptrdiff_t>(e))) break;
    }
    if (k == blocks.size()) break;
  }
  return best;
}

std::vector<Graph> build_connected(std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {Graph(1)};
  // Every connected graph has a vertex whose removal keeps it connected, so extending the
  // (n-1)-vertex graphs by one vertex with a nonempty neighbourhood reaches all of them.
  std::map<Code, Graph> seen;
  for (const Graph& h : connected_graphs(n - 1)) {
    for (std::uint32_t nb = 1; nb < (1U << (n - 1)); ++nb) {
      Graph g(n);
      for (const auto& [u, v] : h.edges()) g.add_edge(u, v);
      for (Vertex u = 0; u + 1 < n; ++u)
        if ((nb >> u) & 1U) g.add_edge(u, static_cast<Vertex>(n - 1));
      seen.emplace(canonical_code(g), std::move(g));
    }
  }
  std::vector<Graph> out;
  for (auto& [code, g] : seen) out.push_back(std::move(g));
  return out;
}

}  // namespace

const std::vector<Graph>& connected_graphs(std::size_t n) {
  if (n > 7) throw std::invalid_argument("connected_graphs supports n <= 7");
  static std::map<std::size_t, std::vector<Graph>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_connected(n)).first;
  return it->second;
}

std::vector<Graph> connected_graphs_up_to(std::size_t n) {
  std::vector<Graph> out;
  for (std::size_t k = 1; k <= n; ++k) {
    const auto& gs = connected_graphs(k);
    out.insert(out.end(), gs.begin(), gs.end());
  }
  return out;
}

Graph random_graph(std::size_t n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  Graph g(n);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (coin(rng)) g.add_edge(u, v);
  return g;
}

std::vector<Graph> random_graphs(std::size_t n, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Graph> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_graph(n, 0.5, rng));
  return out;
}

Graph path(std::size_t n) {
  Graph g(n);
  for (Vertex v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
  return g;
}

Graph cycle(std::size_t n) {
  Graph g = path(n);
  if (n >= 3) g.add_edge(0, static_cast<Vertex>(n - 1));
  return g;
}

Graph complete(std::size_t n) {
  Graph g(n);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

Graph edgeless(std::size_t n) { return Graph(n); }

Graph star(std::size_t leaves) { return complete_bipartite(1, leaves); }

Graph complete_bipartite(std::size_t a, std::size_t b) {
  Graph g(a + b);
  for (Vertex u = 0; u < a; ++u)
    for (std::size_t v = a; v < a + b; ++v) g.add_edge(u, static_cast<Vertex>(v));
  return g;
}

Graph pad_with_twins(const Graph& g, Vertex v, std::size_t copies) {
  const std::size_t n = g.num_vertices();
  Graph out(n + copies);
  for (const auto& [a, b] : g.edges()) out.add_edge(a, b);
  for (std::size_t c = 0; c < copies; ++c)
    for (Vertex w : g.neighbors(v)) out.add_edge(w, static_cast<Vertex>(n + c));
  return out;
}

std::vector<std::uint64_t> masks(const std::vector<VertexSet>& sets) {
  std::vector<std::uint64_t> out;
  for (const auto& s : sets) {
    std::uint64_t m = 0;
    for (Vertex v : s.members()) m |= std::uint64_t{1} << v;
    out.push_back(m);
  }
  return out;
}

std::size_t brute_chromatic_number(const Graph& g) {
  const std::size_t n = g.num_vertices();
  if (n == 0) return 0;
  const auto edges = g.edges();
  for (std::size_t k = 1;; ++k) {
    std::vector<std::size_t> colour(n, 0);
    while (true) {
      bool proper = true;
      for (const auto& [u, v] : edges) proper = proper && colour[u] != colour[v];
      if (proper) return k;
      std::size_t i = 0;
      while (i < n && colour[i] + 1 == k) colour[i++] = 0;
      if (i == n) break;
      ++colour[i];
    }
  }
}

}  // namespace cardmso::testing

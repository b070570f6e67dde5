#include "cardmso/oracle.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <vector>

#include "cardmso/errors.hpp"

namespace cardmso::oracle {

namespace {

void check_cap(const Graph& g, std::size_t cap) {
  if (cap > 62) throw InputError("oracle cap cannot exceed 62 vertices");
  if (g.num_vertices() > cap)
    throw BudgetExceeded("oracle cap of " + std::to_string(cap) + " vertices exceeded (graph has " +
                         std::to_string(g.num_vertices()) + ")");
}

// Sentence evaluation restricted to the subgraph induced by `universe`.
class Direct {
 public:
  Direct(const Graph& g, const Formula& f, std::uint64_t universe)
      : f_(f), universe_(universe), adj_(g.num_vertices(), 0) {
    for (const auto& [u, v] : g.edges()) {
      adj_[u] |= std::uint64_t{1} << v;
      adj_[v] |= std::uint64_t{1} << u;
    }
    vertex_.assign(static_cast<std::size_t>(std::max(f.vertex_slots, 1)), 0);
    set_.assign(static_cast<std::size_t>(std::max(f.set_slots, 1)), 0);
    if (!f.parameters().empty()) throw InputError("formula has unbound parameter $" + f.parameters().front());
  }

  bool holds() { return prefix(0); }

  bool holds_under(const std::vector<std::uint64_t>& masks) {
    if (masks.size() != f_.prefix.size()) throw InputError("prefix assignment does not match the formula");
    for (std::size_t i = 0; i < masks.size(); ++i) {
      if (masks[i] & ~universe_) throw InputError("prefix set contains a vertex outside the graph");
      set_[i] = masks[i];
    }
    return eval(*f_.body);
  }

 private:
  bool prefix(std::size_t i) {
    if (i == f_.prefix.size()) return eval(*f_.body);
    // Every submask of the universe, the empty set included.
    std::uint64_t s = 0;
    while (true) {
      set_[i] = s;
      if (prefix(i + 1)) return true;
      if (s == universe_) return false;
      s = (s - universe_) & universe_;
    }
  }

  std::int64_t rho(const Rho& r) const {
    std::int64_t sum = 0;
    for (const auto& t : r) {
      if (t.kind == RhoTerm::Kind::kConstant) sum += t.value;
      else if (t.kind == RhoTerm::Kind::kCardinality) sum += std::popcount(set_[static_cast<std::size_t>(t.prefix_index)]);
      else throw InputError("unbound parameter $" + t.name);
    }
    return sum;
  }

  bool member(Vertex v, std::uint64_t s) const { return (s >> v) & 1U; }

  bool eval(const Node& n) {
    const auto vslot = [&](int i) { return vertex_[static_cast<std::size_t>(n.vars[i].slot)]; };
    const auto sslot = [&](int i) { return set_[static_cast<std::size_t>(n.vars[i].slot)]; };
    switch (n.kind) {
      case NodeKind::kTrue: return true;
      case NodeKind::kFalse: return false;
      case NodeKind::kMember: return member(vslot(0), sslot(1));
      case NodeKind::kAdjacent: return member(vslot(1), adj_[vslot(0)]);
      case NodeKind::kEqual:
        return n.vars[0].sort == Sort::kVertex ? vslot(0) == vslot(1) : sslot(0) == sslot(1);
      case NodeKind::kNot: return !eval(*n.children[0]);
      case NodeKind::kAnd: return eval(*n.children[0]) && eval(*n.children[1]);
      case NodeKind::kOr: return eval(*n.children[0]) || eval(*n.children[1]);
      case NodeKind::kImplies: return !eval(*n.children[0]) || eval(*n.children[1]);
      case NodeKind::kIff: return eval(*n.children[0]) == eval(*n.children[1]);
      case NodeKind::kConstraint: {
        const auto& c = f_.constraints[static_cast<std::size_t>(n.constraint)];
        return rho(c.lhs) <= rho(c.rhs);
      }
      case NodeKind::kExists:
      case NodeKind::kForall: {
        const bool want = n.kind == NodeKind::kExists;
        const auto slot = static_cast<std::size_t>(n.vars[0].slot);
        if (n.vars[0].sort == Sort::kVertex) {
          for (std::uint64_t rest = universe_; rest; rest &= rest - 1) {
            vertex_[slot] = static_cast<Vertex>(std::countr_zero(rest));
            if (eval(*n.children[0]) == want) return want;
          }
          return !want;
        }
        std::uint64_t s = 0;
        while (true) {
          set_[slot] = s;
          if (eval(*n.children[0]) == want) return want;
          if (s == universe_) return !want;
          s = (s - universe_) & universe_;
        }
      }
    }
    throw InternalError("unhandled node kind");
  }

  const Formula& f_;
  std::uint64_t universe_;
  std::vector<std::uint64_t> adj_;
  std::vector<Vertex> vertex_;
  std::vector<std::uint64_t> set_;
};

std::uint64_t all_vertices(const Graph& g) {
  return g.num_vertices() == 0 ? 0 : (~std::uint64_t{0} >> (64 - g.num_vertices()));
}

}  // namespace

bool brute_check(const Graph& g, const Formula& f, std::size_t cap) {
  check_cap(g, cap);
  return Direct(g, f, all_vertices(g)).holds();
}

bool brute_holds_under(const Graph& g, const Formula& f, const std::vector<std::uint64_t>& prefix_masks,
                       std::size_t cap) {
  check_cap(g, cap);
  return Direct(g, f, all_vertices(g)).holds_under(prefix_masks);
}

bool brute_partition(const Graph& g, const Formula& phi, std::size_t r, bool allow_empty, std::size_t cap) {
  check_cap(g, cap);
  if (r == 0) throw InputError("number of parts must be at least 1");
  if (!phi.constraints.empty()) throw InputError("partition formula must not contain linear constraints");
  const std::size_t n = g.num_vertices();
  if (r > n + 1) throw InputError("number of parts exceeds |V| + 1");

  std::map<std::uint64_t, bool> memo;
  auto models = [&](std::uint64_t part) {
    auto it = memo.find(part);
    if (it == memo.end()) it = memo.emplace(part, Direct(g, phi, part).holds()).first;
    return it->second;
  };
  const bool empty_ok = allow_empty && models(0);

  // Restricted growth strings: vertex v joins an existing part or opens the next one, so
  // parts are ordered by their smallest vertex.
  std::vector<std::uint64_t> parts;
  auto place = [&](auto&& self, std::size_t v) -> bool {
    if (v == n) {
      if (parts.size() < r && !empty_ok) return false;
      for (std::uint64_t p : parts)
        if (!models(p)) return false;
      return true;
    }
    const std::uint64_t bit = std::uint64_t{1} << v;
    for (std::size_t p = 0; p < parts.size(); ++p) {
      parts[p] |= bit;
      const bool ok = self(self, v + 1);
      parts[p] &= ~bit;
      if (ok) return true;
    }
    if (parts.size() < r) {
      parts.push_back(bit);
      const bool ok = self(self, v + 1);
      parts.pop_back();
      if (ok) return true;
    }
    return false;
  };
  return place(place, 0);
}

std::optional<std::int64_t> brute_cbalanced(const Graph& g, std::size_t c, bool allow_empty, std::size_t cap) {
  check_cap(g, cap);
  if (c == 0) throw InputError("number of parts must be at least 1");
  const std::size_t n = g.num_vertices();
  const auto edges = g.edges();
  std::vector<std::size_t> label(n, 0);
  std::vector<std::size_t> sizes(c, 0);
  sizes[0] = n;
  std::optional<std::int64_t> best;
  while (true) {
    const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
    if (*hi - *lo <= 1 && (allow_empty || *lo > 0)) {
      std::int64_t cut = 0;
      for (const auto& [u, v] : edges) cut += label[u] != label[v];
      if (!best || cut < *best) best = cut;
    }
    std::size_t v = 0;
    while (v < n && label[v] + 1 == c) {
      --sizes[label[v]];
      label[v] = 0;
      ++sizes[0];
      ++v;
    }
    if (v == n) break;
    --sizes[label[v]];
    ++sizes[++label[v]];
  }
  return best;
}

}  // namespace cardmso::oracle

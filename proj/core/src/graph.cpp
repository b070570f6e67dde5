#include "cardmso/graph.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>
#include <unordered_map>

#include "cardmso/errors.hpp"

namespace cardmso {

Graph::Graph(std::size_t n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) names.push_back(std::to_string(i));
  *this = Graph(std::move(names));
}

Graph::Graph(std::vector<std::string> names)
    : names_(std::move(names)),
      adjacency_(names_.size()),
      words_((names_.size() + 63) / 64) {
  matrix_.assign(names_.size() * words_, 0);
}

bool Graph::add_edge(Vertex u, Vertex v) {
  if (u >= num_vertices() || v >= num_vertices()) throw InputError("edge endpoint out of range");
  if (u == v) throw InputError("self-loop on vertex " + names_[u]);
  if (adjacent(u, v)) return false;
  matrix_[static_cast<std::size_t>(u) * words_ + (v >> 6)] |= std::uint64_t{1} << (v & 63);
  matrix_[static_cast<std::size_t>(v) * words_ + (u >> 6)] |= std::uint64_t{1} << (u & 63);
  auto insert_sorted = [](std::vector<Vertex>& list, Vertex x) {
    list.insert(std::upper_bound(list.begin(), list.end(), x), x);
  };
  insert_sorted(adjacency_[u], v);
  insert_sorted(adjacency_[v], u);
  ++num_edges_;
  return true;
}

std::optional<Vertex> Graph::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<Vertex>(i);
  return std::nullopt;
}

std::vector<std::pair<Vertex, Vertex>> Graph::edges() const {
  std::vector<std::pair<Vertex, Vertex>> out;
  out.reserve(num_edges_);
  for (Vertex u = 0; u < num_vertices(); ++u)
    for (Vertex v : adjacency_[u])
      if (u < v) out.emplace_back(u, v);
  return out;
}

Graph Graph::induced_subgraph(std::span<const Vertex> keep) const {
  std::vector<std::string> names;
  names.reserve(keep.size());
  for (Vertex v : keep) names.push_back(names_[v]);
  Graph sub(std::move(names));
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = i + 1; j < keep.size(); ++j)
      if (adjacent(keep[i], keep[j])) sub.add_edge(static_cast<Vertex>(i), static_cast<Vertex>(j));
  return sub;
}

Graph Graph::relabeled(std::span<const Vertex> perm) const {
  std::vector<std::string> names(num_vertices());
  for (Vertex v = 0; v < num_vertices(); ++v) names[perm[v]] = names_[v];
  Graph out(std::move(names));
  for (auto [u, v] : edges()) out.add_edge(perm[u], perm[v]);
  return out;
}

bool operator==(const Graph& a, const Graph& b) {
  return a.names_ == b.names_ && a.matrix_ == b.matrix_;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

std::size_t parse_count(std::string_view field, std::size_t line_no) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw ParseError("expected a non-negative integer, got '" + std::string(field) + "'", line_no, 1);
  return value;
}

}  // namespace

Graph parse_graph(std::string_view text) {
  std::optional<std::size_t> n;
  std::size_t declared_edges = 0;
  std::vector<std::string> names;
  std::vector<std::pair<std::pair<Vertex, Vertex>, std::size_t>> edge_lines;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    auto fields = split_fields(line);
    if (fields.empty() || fields[0].front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    const std::string_view tag = fields[0];
    if (tag == "p") {
      if (n) throw ParseError("duplicate 'p' header", line_no, 1);
      if (fields.size() != 3) throw ParseError("expected 'p <n> <m>'", line_no, 1);
      n = parse_count(fields[1], line_no);
      declared_edges = parse_count(fields[2], line_no);
      for (std::size_t i = 1; i <= *n; ++i) names.push_back(std::to_string(i));
    } else if (tag == "v" || tag == "e") {
      if (!n) throw ParseError("'" + std::string(tag) + "' line before 'p' header", line_no, 1);
      if (fields.size() != 3) {
        throw ParseError(tag == "v" ? "expected 'v <index> <name>'" : "expected 'e <i> <j>'",
                         line_no, 1);
      }
      std::size_t i = parse_count(fields[1], line_no);
      if (i == 0 || i > *n)
        throw ParseError("unknown vertex " + std::string(fields[1]), line_no, 1);
      if (tag == "v") {
        names[i - 1] = std::string(fields[2]);
      } else {
        std::size_t j = parse_count(fields[2], line_no);
        if (j == 0 || j > *n)
          throw ParseError("unknown vertex " + std::string(fields[2]), line_no, 1);
        if (i == j) throw ParseError("self-loop on vertex " + std::to_string(i), line_no, 1);
        edge_lines.push_back({{static_cast<Vertex>(i - 1), static_cast<Vertex>(j - 1)}, line_no});
      }
    } else {
      throw ParseError("unknown line type '" + std::string(tag) + "'", line_no, 1);
    }
    if (end == text.size()) break;
  }
  if (!n) throw ParseError("missing 'p <n> <m>' header", line_no, 1);

  std::map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!seen.emplace(names[i], i).second)
      throw InputError("duplicate vertex name '" + names[i] + "'");
  }

  Graph g(std::move(names));
  for (const auto& [edge, ln] : edge_lines) g.add_edge(edge.first, edge.second);
  if (g.num_edges() != declared_edges) {
    throw InputError("header declares " + std::to_string(declared_edges) + " edges but " +
                     std::to_string(g.num_edges()) + " distinct edges were listed");
  }
  return g;
}

std::string format_graph(const Graph& g) {
  std::ostringstream out;
  out << "p " << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (Vertex v = 0; v < g.num_vertices(); ++v)
    if (g.name(v) != std::to_string(v + 1)) out << "v " << v + 1 << ' ' << g.name(v) << '\n';
  for (auto [u, v] : g.edges()) out << "e " << u + 1 << ' ' << v + 1 << '\n';
  return out.str();
}

bool is_vertex_cover(const Graph& g, const VertexSet& cover) {
  for (auto [u, v] : g.edges())
    if (!cover.contains(u) && !cover.contains(v)) return false;
  return true;
}

namespace {

class CoverSearch {
 public:
  explicit CoverSearch(const Graph& g) : g_(g), chosen_(g.num_vertices()) {}

  bool search(std::size_t budget) {
    auto edge = first_uncovered();
    if (!edge) return true;
    if (budget == 0) return false;
    for (Vertex pick : {edge->first, edge->second}) {
      chosen_.insert(pick);
      if (search(budget - 1)) return true;
      chosen_.erase(pick);
    }
    return false;
  }

  const VertexSet& chosen() const { return chosen_; }

 private:
  std::optional<std::pair<Vertex, Vertex>> first_uncovered() const {
    for (Vertex u = 0; u < g_.num_vertices(); ++u) {
      if (chosen_.contains(u)) continue;
      for (Vertex v : g_.neighbors(u))
        if (v > u && !chosen_.contains(v)) return std::make_pair(u, v);
    }
    return std::nullopt;
  }

  const Graph& g_;
  VertexSet chosen_;
};

}  // namespace

VertexCover min_vertex_cover(const Graph& g, std::size_t k_max) {
  for (std::size_t k = 0; k <= k_max; ++k) {
    CoverSearch search(g);
    if (search.search(k)) {
      VertexCover out{search.chosen(), search.chosen().size()};
      return out;
    }
  }
  throw CoverExceedsBudget(k_max);
}

bool TypePartition::is_cover_type(std::size_t t) const {
  return std::find(cover_types.begin(), cover_types.end(), t) != cover_types.end();
}

bool same_type(const Graph& g, Vertex u, Vertex v) {
  if (u == v) return true;
  auto row_u = g.adjacency_row(u);
  auto row_v = g.adjacency_row(v);
  for (std::size_t w = 0; w < g.words(); ++w) {
    std::uint64_t a = row_u[w];
    std::uint64_t b = row_v[w];
    if ((v >> 6) == w) a &= ~(std::uint64_t{1} << (v & 63));
    if ((u >> 6) == w) b &= ~(std::uint64_t{1} << (u & 63));
    if (a != b) return false;
  }
  return true;
}

namespace {

void finalize(TypePartition& tp, std::size_t n) {
  std::sort(tp.types.begin(), tp.types.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  tp.type_of.assign(n, 0);
  for (std::size_t t = 0; t < tp.types.size(); ++t)
    for (Vertex v : tp.types[t]) tp.type_of[v] = t;
}

}  // namespace

TypePartition type_partition(const Graph& g, const VertexCover& cover) {
  if (cover.cover.universe() != g.num_vertices() || !is_vertex_cover(g, cover.cover))
    throw InputError("invalid vertex cover: some edge is uncovered");

  TypePartition tp;
  tp.mode = PartitionMode::kVertexCover;
  std::map<std::vector<Vertex>, std::size_t> by_neighborhood;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (cover.cover.contains(v)) {
      tp.types.push_back({v});
      continue;
    }
    std::vector<Vertex> key(g.neighbors(v).begin(), g.neighbors(v).end());
    auto [it, inserted] = by_neighborhood.emplace(std::move(key), tp.types.size());
    if (inserted)
      tp.types.push_back({v});
    else
      tp.types[it->second].push_back(v);
  }
  finalize(tp, g.num_vertices());
  for (std::size_t t = 0; t < tp.types.size(); ++t)
    if (cover.cover.contains(tp.types[t].front())) tp.cover_types.push_back(t);
  return tp;
}

TypePartition nd_partition(const Graph& g) {
  TypePartition tp;
  tp.mode = PartitionMode::kNeighborhoodDiversity;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    bool placed = false;
    for (auto& type : tp.types) {
      if (same_type(g, type.front(), v)) {
        type.push_back(v);
        placed = true;
        break;
      }
    }
    if (!placed) tp.types.push_back({v});
  }
  finalize(tp, g.num_vertices());
  return tp;
}

}  // namespace cardmso

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cardmso/vertex_set.hpp"

namespace cardmso {

/// Simple undirected graph over dense indices 0..n-1, each carrying an external name.
///
/// Built incrementally with add_edge(); treated as an immutable value afterwards.
/// Neighbor lists are kept sorted and an adjacency bit-matrix backs adjacent().
class Graph {
 public:
  Graph() = default;
  /// n vertices named "1".."n".
  explicit Graph(std::size_t n);
  explicit Graph(std::vector<std::string> names);

  /// Adds {u, v}; returns false if the edge was already present. Throws InputError on a self-loop.
  bool add_edge(Vertex u, Vertex v);

  std::size_t num_vertices() const { return names_.size(); }
  std::size_t num_edges() const { return num_edges_; }

  bool adjacent(Vertex u, Vertex v) const {
    return (matrix_[static_cast<std::size_t>(u) * words_ + (v >> 6)] >> (v & 63)) & 1U;
  }
  std::span<const Vertex> neighbors(Vertex v) const { return adjacency_[v]; }
  std::size_t degree(Vertex v) const { return adjacency_[v].size(); }
  /// Row of the adjacency bit-matrix, words() words long.
  std::span<const std::uint64_t> adjacency_row(Vertex v) const {
    return {matrix_.data() + static_cast<std::size_t>(v) * words_, words_};
  }
  std::size_t words() const { return words_; }

  const std::string& name(Vertex v) const { return names_[v]; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<Vertex> find(std::string_view name) const;

  /// Edges as (u, v) with u < v, in lexicographic order.
  std::vector<std::pair<Vertex, Vertex>> edges() const;

  /// Subgraph induced by `keep`; new vertex i is keep[i] and keeps its name.
  Graph induced_subgraph(std::span<const Vertex> keep) const;

  /// Same graph with vertex v moved to position perm[v]; names follow their vertices.
  Graph relabeled(std::span<const Vertex> perm) const;

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<Vertex>> adjacency_;
  std::vector<std::uint64_t> matrix_;
  std::size_t words_ = 0;
  std::size_t num_edges_ = 0;
};

/// Parses the `p n m` / `v i name` / `e i j` text format. Throws ParseError.
Graph parse_graph(std::string_view text);
/// Renders a graph in the same text format (aliases emitted only for non-default names).
std::string format_graph(const Graph& g);

struct VertexCover {
  VertexSet cover;
  std::size_t size = 0;
};

inline constexpr std::size_t kDefaultKMax = 20;

/// Exact minimum vertex cover by 2-way edge branching under an increasing budget.
/// Throws CoverExceedsBudget when no cover of size <= k_max exists.
VertexCover min_vertex_cover(const Graph& g, std::size_t k_max = kDefaultKMax);

bool is_vertex_cover(const Graph& g, const VertexSet& cover);

enum class PartitionMode { kVertexCover, kNeighborhoodDiversity };

/// Partition of V(G) into types (classes of twins, N(u)\{v} = N(v)\{u}).
///
/// Types are ordered by their smallest vertex and list members in increasing order.
/// In vertex-cover mode every cover vertex is its own type and listed in cover_types.
struct TypePartition {
  std::vector<std::vector<Vertex>> types;
  std::vector<std::size_t> cover_types;
  PartitionMode mode = PartitionMode::kVertexCover;
  std::vector<std::size_t> type_of;  // vertex -> type index

  std::size_t num_types() const { return types.size(); }
  bool is_cover_type(std::size_t t) const;
};

/// Vertex-cover-mode types. Throws InputError if `cover` leaves an edge uncovered.
TypePartition type_partition(const Graph& g, const VertexCover& cover);

/// Maximal twin classes; the number of types is the neighborhood diversity of g.
TypePartition nd_partition(const Graph& g);

/// N(u)\{v} == N(v)\{u}.
bool same_type(const Graph& g, Vertex u, Vertex v);

}  // namespace cardmso

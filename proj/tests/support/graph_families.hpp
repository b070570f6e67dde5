#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "cardmso/graph.hpp"

namespace cardmso::testing {

/// Connected graphs on exactly n vertices, one per isomorphism class (n <= 7).
const std::vector<Graph>& connected_graphs(std::size_t n);
/// Connected graphs on 1..n vertices.
std::vector<Graph> connected_graphs_up_to(std::size_t n);

/// G(n, p) with the given engine.
Graph random_graph(std::size_t n, double p, std::mt19937_64& rng);
/// `count` G(n, 1/2) graphs from a fixed seed.
std::vector<Graph> random_graphs(std::size_t n, std::size_t count, std::uint64_t seed);

Graph path(std::size_t n);
Graph cycle(std::size_t n);
Graph complete(std::size_t n);
Graph edgeless(std::size_t n);
Graph star(std::size_t leaves);
Graph complete_bipartite(std::size_t a, std::size_t b);
/// g with `copies` extra non-adjacent twins of vertex v.
Graph pad_with_twins(const Graph& g, Vertex v, std::size_t copies);

/// Vertex sets as bitmasks, for the oracle.
std::vector<std::uint64_t> masks(const std::vector<VertexSet>& sets);

/// Smallest k admitting a proper k-colouring, by trying every colouring.
std::size_t brute_chromatic_number(const Graph& g);

}  // namespace cardmso::testing

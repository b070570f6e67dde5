#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace cardmso {

using Vertex = std::uint32_t;

/// Fixed-universe bitset over the dense vertex indices [0, universe).
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::size_t universe);
  VertexSet(std::size_t universe, std::initializer_list<Vertex> members);

  static VertexSet full(std::size_t universe);
  /// Low 64 bits of `mask` become members; universe must be <= 64.
  static VertexSet from_mask(std::size_t universe, std::uint64_t mask);

  std::size_t universe() const { return universe_; }
  bool contains(Vertex v) const { return (words_[v >> 6] >> (v & 63)) & 1U; }
  void insert(Vertex v) { words_[v >> 6] |= std::uint64_t{1} << (v & 63); }
  void erase(Vertex v) { words_[v >> 6] &= ~(std::uint64_t{1} << (v & 63)); }
  void set(Vertex v, bool member) { member ? insert(v) : erase(v); }

  std::size_t size() const;
  bool empty() const;
  std::vector<Vertex> members() const;

  VertexSet& operator|=(const VertexSet& other);
  VertexSet& operator&=(const VertexSet& other);
  VertexSet complement() const;

  const std::vector<std::uint64_t>& words() const { return words_; }

  friend bool operator==(const VertexSet& a, const VertexSet& b) = default;
  friend auto operator<=>(const VertexSet& a, const VertexSet& b) = default;

 private:
  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace cardmso

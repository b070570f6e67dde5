#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "cardmso/formula.hpp"
#include "cardmso/graph.hpp"

// Reference answers by exhaustive search on the graph itself. Nothing here uses types,
// covers, reduction or integer programming.
namespace cardmso::oracle {

inline constexpr std::size_t kDefaultCap = 8;

/// g |= f by direct recursive evaluation, the prefix ranging over all subsets of V(g) and
/// constraints evaluated from the prefix set sizes. Throws BudgetExceeded if g has more than
/// `cap` vertices, InputError on unbound parameters.
bool brute_check(const Graph& g, const Formula& f, std::size_t cap = kDefaultCap);

/// g |=_chi f for the prefix sets given as vertex bitmasks (bit v set <=> v in Z_i),
/// constraints evaluated from the mask sizes.
bool brute_holds_under(const Graph& g, const Formula& f, const std::vector<std::uint64_t>& prefix_masks,
                       std::size_t cap = kDefaultCap);

/// Can V(g) be split into r sets each inducing a model of phi? Empty sets are allowed
/// only when allow_empty is set.
bool brute_partition(const Graph& g, const Formula& phi, std::size_t r, bool allow_empty = true,
                     std::size_t cap = kDefaultCap);

/// Fewest cut edges over all partitions into c sets whose sizes differ by at most one;
/// nullopt when no such partition exists.
std::optional<std::int64_t> brute_cbalanced(const Graph& g, std::size_t c, bool allow_empty = true,
                                            std::size_t cap = kDefaultCap);

}  // namespace cardmso::oracle

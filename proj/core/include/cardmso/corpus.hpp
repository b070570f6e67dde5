#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// Formula texts for the standard problems. Each parses with parse_formula.
namespace cardmso::corpus {

/// Bipartite with both sides of equal size.
std::string bipartite_equal();
/// Proper colouring with c classes whose sizes differ by at most one.
std::string equitable_coloring(std::size_t c);
/// Partition into c connected parts whose sizes differ by at most one.
std::string equitable_connected(std::size_t c);
/// Independent dominating set of size $k.
std::string independent_dominating_set();
/// Plain MSO sentences for partitioning.
std::string independence();
std::string clique();

/// Names understood by text(): bipartite_equal, equitable_coloring, equitable_connected,
/// ids_k, independence, clique.
const std::vector<std::string>& names();
/// Throws InputError on an unknown name. `c` is used by the equitable families only.
std::string text(std::string_view name, std::size_t c = 3);

}  // namespace cardmso::corpus

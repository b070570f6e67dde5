#include "cardmso/corpus.hpp"

#include "cardmso/errors.hpp"

namespace cardmso::corpus {

namespace {

std::vector<std::string> class_names(std::size_t c) {
  if (c == 0) throw InputError("number of classes must be at least 1");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < c; ++i)
    out.push_back(c <= 26 ? std::string(1, static_cast<char>('A' + i)) : "X" + std::to_string(i + 1));
  return out;
}

std::string prefix(const std::vector<std::string>& x) {
  std::string s = "exists ";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ", " : "") + x[i];
  return s + ".\n";
}

// Every vertex lies in exactly one class.
std::string exactly_one(const std::vector<std::string>& x) {
  std::string s = "  (forall x. ";
  if (x.size() == 1) return s + "x in " + x[0] + ")\n";
  s += "(";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? " or " : "") + ("x in " + x[i]);
  s += ")";
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) s += "\n      and not (x in " + x[i] + " and x in " + x[j] + ")";
  return s + ")\n";
}

std::string equi(const std::string& t, const std::string& u) {
  return "  and ([|" + t + "| = |" + u + "| + 1] or [|" + t + "| + 1 = |" + u + "|] or [|" + t + "| = |" + u + "|])\n";
}

std::string all_equi(const std::vector<std::string>& x) {
  std::string s;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) s += equi(x[i], x[j]);
  return s;
}

std::string conn(const std::string& u) {
  return "  and (forall T. (forall x. x in T -> x in " + u + ") -> (T = " + u +
         " or not (exists a. a in T) or (exists a, b. a in " + u + " and not a in T and b in T and adj(a, b))))\n";
}

}  // namespace

std::string bipartite_equal() {
  return "# bipartite, both sides of the same size\n"
         "exists X1, X2.\n"
         "  (forall v. (v in X1 <-> not v in X2))\n"
         "  and [|X1| = |X2|]\n"
         "  and (forall u. forall v. adj(u, v) -> ((u in X1 and v in X2) or (u in X2 and v in X1)))\n";
}

std::string equitable_coloring(std::size_t c) {
  const auto x = class_names(c);
  std::string s = "# equitable " + std::to_string(c) + "-colouring\n" + prefix(x) + exactly_one(x);
  s += "  and (forall x. forall y. (";
  for (std::size_t i = 0; i < x.size(); ++i)
    s += (i ? " or " : "") + ("(x in " + x[i] + " and y in " + x[i] + ")");
  s += ") -> not adj(x, y))\n";
  return s + all_equi(x);
}

std::string equitable_connected(std::size_t c) {
  const auto x = class_names(c);
  std::string s = "# equitable partition into " + std::to_string(c) + " connected parts\n" + prefix(x) + exactly_one(x);
  for (const auto& name : x) s += conn(name);
  return s + all_equi(x);
}

std::string independent_dominating_set() {
  return "# independent dominating set of size $k\n"
         "exists X.\n"
         "  (forall a. forall b. (a in X and b in X) -> not adj(a, b))\n"
         "  and (forall b. b in X or (exists a. a in X and adj(a, b)))\n"
         "  and [|X| = $k]\n";
}

std::string independence() { return "# no edges\nforall u. forall v. not adj(u, v)\n"; }

std::string clique() { return "# all distinct vertices adjacent\nforall u. forall v. u = v or adj(u, v)\n"; }

const std::vector<std::string>& names() {
  static const std::vector<std::string> all = {"bipartite_equal", "equitable_coloring", "equitable_connected",
                                               "ids_k", "independence", "clique"};
  return all;
}

std::string text(std::string_view name, std::size_t c) {
  if (name == "bipartite_equal") return bipartite_equal();
  if (name == "equitable_coloring") return equitable_coloring(c);
  if (name == "equitable_connected") return equitable_connected(c);
  if (name == "ids_k") return independent_dominating_set();
  if (name == "independence") return independence();
  if (name == "clique") return clique();
  throw InputError("unknown corpus formula '" + std::string(name) + "'");
}

}  // namespace cardmso::corpus

#include "cardmso/formula.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

#include "cardmso/errors.hpp"

namespace cardmso {

bool structurally_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.constraint != b.constraint || a.children.size() != b.children.size())
    return false;
  for (int i = 0; i < 2; ++i)
    if (!(a.vars[i] == b.vars[i])) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!structurally_equal(*a.children[i], *b.children[i])) return false;
  return true;
}

std::vector<std::string> Formula::parameters() const {
  std::set<std::string> names;
  for (const auto& c : constraints)
    for (const Rho* rho : {&c.lhs, &c.rhs})
      for (const auto& t : *rho)
        if (t.kind == RhoTerm::Kind::kParameter) names.insert(t.name);
  return {names.begin(), names.end()};
}

namespace {

std::uint64_t saturating_shift(std::size_t bits, std::uint64_t factor) {
  if (bits >= 62) return std::numeric_limits<std::uint64_t>::max();
  std::uint64_t base = std::uint64_t{1} << bits;
  if (factor != 0 && base > std::numeric_limits<std::uint64_t>::max() / factor)
    return std::numeric_limits<std::uint64_t>::max();
  return base * factor;
}

}  // namespace

std::uint64_t FormulaStats::small_threshold() const {
  return saturating_shift(q_s, std::max<std::uint64_t>(q_v, 1));
}

std::uint64_t FormulaStats::reduce_threshold() const {
  return saturating_shift(q_s + m, std::max<std::uint64_t>(q_v, 1));
}

PreEvaluation pre_evaluation_at(std::uint64_t index, std::size_t constraint_count) {
  PreEvaluation alpha;
  alpha.values.resize(constraint_count);
  for (std::size_t j = 0; j < constraint_count; ++j)
    alpha.values[j] = j >= 64 || ((index >> j) & 1U) == 0;
  return alpha;
}

namespace {

void print_rho(std::ostream& out, const Rho& rho) {
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (i > 0) out << " + ";
    const auto& t = rho[i];
    switch (t.kind) {
      case RhoTerm::Kind::kConstant: out << t.value; break;
      case RhoTerm::Kind::kParameter: out << '$' << t.name; break;
      case RhoTerm::Kind::kCardinality: out << '|' << t.name << '|'; break;
    }
  }
}

bool is_atomic(const Node& n) {
  switch (n.kind) {
    case NodeKind::kTrue:
    case NodeKind::kFalse:
    case NodeKind::kMember:
    case NodeKind::kAdjacent:
    case NodeKind::kEqual:
    case NodeKind::kConstraint:
    case NodeKind::kNot:
      return true;
    default:
      return false;
  }
}

void print(std::ostream& out, const Formula& f, const Node& n);

void print_operand(std::ostream& out, const Formula& f, const Node& n) {
  if (is_atomic(n)) {
    print(out, f, n);
  } else {
    out << '(';
    print(out, f, n);
    out << ')';
  }
}

void print(std::ostream& out, const Formula& f, const Node& n) {
  switch (n.kind) {
    case NodeKind::kTrue: out << "true"; break;
    case NodeKind::kFalse: out << "false"; break;
    case NodeKind::kMember: out << n.vars[0].name << " in " << n.vars[1].name; break;
    case NodeKind::kAdjacent: out << "adj(" << n.vars[0].name << ", " << n.vars[1].name << ')'; break;
    case NodeKind::kEqual: out << n.vars[0].name << " = " << n.vars[1].name; break;
    case NodeKind::kConstraint: {
      const auto& c = f.constraints.at(static_cast<std::size_t>(n.constraint));
      out << '[';
      print_rho(out, c.lhs);
      out << " <= ";
      print_rho(out, c.rhs);
      out << ']';
      break;
    }
    case NodeKind::kNot:
      out << "not ";
      print_operand(out, f, *n.children[0]);
      break;
    case NodeKind::kAnd:
    case NodeKind::kOr:
    case NodeKind::kImplies:
    case NodeKind::kIff: {
      const char* op = n.kind == NodeKind::kAnd ? " and "
                       : n.kind == NodeKind::kOr ? " or "
                       : n.kind == NodeKind::kImplies ? " -> "
                                                      : " <-> ";
      print_operand(out, f, *n.children[0]);
      out << op;
      print_operand(out, f, *n.children[1]);
      break;
    }
    case NodeKind::kExists:
    case NodeKind::kForall:
      out << (n.kind == NodeKind::kExists ? "exists " : "forall ") << n.vars[0].name << ". ";
      print(out, f, *n.children[0]);
      break;
  }
}

}  // namespace

std::string print_node(const Formula& f, const Node& n) {
  std::ostringstream out;
  print(out, f, n);
  return out.str();
}

std::string print_formula(const Formula& f) {
  std::ostringstream out;
  if (!f.prefix.empty()) {
    out << "exists ";
    for (std::size_t i = 0; i < f.prefix.size(); ++i) out << (i ? ", " : "") << f.prefix[i];
    out << ". ";
  }
  print(out, f, *f.body);
  return out.str();
}

FormulaStats analyze(const Formula& f) {
  std::set<std::string> set_names;
  std::set<std::string> vertex_names;
  std::function<void(const Node&)> walk = [&](const Node& n) {
    if (n.kind == NodeKind::kExists || n.kind == NodeKind::kForall)
      (n.vars[0].sort == Sort::kSet ? set_names : vertex_names).insert(n.vars[0].name);
    for (const auto& c : n.children) walk(*c);
  };
  walk(*f.body);
  FormulaStats s;
  s.m = f.prefix.size();
  s.q_s = set_names.size();
  s.q_v = vertex_names.size();
  s.constraint_count = f.constraints.size();
  return s;
}

namespace {

NodePtr rewrite(const NodePtr& n, const std::function<NodePtr(const Node&)>& leaf) {
  if (n->kind == NodeKind::kConstraint) return leaf(*n);
  if (n->children.empty()) return n;
  auto copy = std::make_shared<Node>(*n);
  bool changed = false;
  for (auto& c : copy->children) {
    NodePtr r = rewrite(c, leaf);
    changed = changed || r != c;
    c = std::move(r);
  }
  return changed ? NodePtr(copy) : n;
}

}  // namespace

Formula substitute_params(const Formula& f, const std::map<std::string, std::int64_t>& bindings,
                          std::vector<std::string>* unused) {
  std::set<std::string> used;
  Formula out = f;
  for (auto& c : out.constraints) {
    for (Rho* rho : {&c.lhs, &c.rhs}) {
      bool had_param = false;
      for (const auto& t : *rho) had_param = had_param || t.kind == RhoTerm::Kind::kParameter;
      if (!had_param) continue;
      Rho folded;
      std::int64_t constant = 0;
      for (const auto& t : *rho) {
        switch (t.kind) {
          case RhoTerm::Kind::kConstant: constant += t.value; break;
          case RhoTerm::Kind::kParameter: {
            auto it = bindings.find(t.name);
            if (it == bindings.end()) throw InputError("no value bound for parameter $" + t.name);
            used.insert(t.name);
            constant += it->second;
            break;
          }
          case RhoTerm::Kind::kCardinality: folded.push_back(t); break;
        }
      }
      if (constant != 0 || folded.empty()) {
        RhoTerm k;
        k.kind = RhoTerm::Kind::kConstant;
        k.value = constant;
        folded.push_back(k);
      }
      *rho = std::move(folded);
    }
  }
  if (unused) {
    for (const auto& [name, value] : bindings)
      if (!used.contains(name)) unused->push_back(name);
  }
  return out;
}

Formula pre_evaluate(const Formula& f, const PreEvaluation& alpha) {
  if (alpha.size() != f.constraints.size()) {
    throw InputError("pre-evaluation has " + std::to_string(alpha.size()) + " values but formula has " +
                     std::to_string(f.constraints.size()) + " constraints");
  }
  Formula out = f;
  out.body = rewrite(f.body, [&](const Node& leaf) {
    auto n = std::make_shared<Node>();
    n->kind = alpha[static_cast<std::size_t>(leaf.constraint)] ? NodeKind::kTrue : NodeKind::kFalse;
    return NodePtr(n);
  });
  out.constraints.clear();
  return out;
}

Formula as_closed_sentence(const Formula& f) {
  if (!f.constraints.empty())
    throw InputError("formula still contains linear constraints; pre-evaluate it first");
  Formula out = f;
  NodePtr body = f.body;
  for (std::size_t i = f.prefix.size(); i-- > 0;) {
    auto q = std::make_shared<Node>();
    q->kind = NodeKind::kExists;
    q->vars[0] = {f.prefix[i], Sort::kSet, static_cast<int>(i)};
    q->children = {body};
    body = q;
  }
  out.body = body;
  out.prefix.clear();
  return out;
}

std::int64_t evaluate_rho(const Rho& rho, const std::vector<std::int64_t>& prefix_sizes) {
  std::int64_t sum = 0;
  for (const auto& t : rho) {
    switch (t.kind) {
      case RhoTerm::Kind::kConstant: sum += t.value; break;
      case RhoTerm::Kind::kCardinality: sum += prefix_sizes.at(static_cast<std::size_t>(t.prefix_index)); break;
      case RhoTerm::Kind::kParameter: throw InputError("unbound parameter $" + t.name);
    }
  }
  return sum;
}

bool evaluate_constraint(const LinearConstraint& c, const std::vector<std::int64_t>& prefix_sizes) {
  return evaluate_rho(c.lhs, prefix_sizes) <= evaluate_rho(c.rhs, prefix_sizes);
}

}  // namespace cardmso

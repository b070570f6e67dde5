#include "evaluator.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <optional>

#include "cardmso/errors.hpp"

namespace cardmso::detail {

namespace {

Truth negate(Truth t) {
  switch (t) {
    case Truth::kFalse: return Truth::kTrue;
    case Truth::kTrue: return Truth::kFalse;
    default: return Truth::kUnknown;
  }
}

std::optional<bool> constant(const Node& n) {
  if (n.kind == NodeKind::kTrue) return true;
  if (n.kind == NodeKind::kFalse) return false;
  return std::nullopt;
}

NodePtr literal(bool value) {
  auto n = std::make_shared<Node>();
  n->kind = value ? NodeKind::kTrue : NodeKind::kFalse;
  return n;
}

NodePtr negation(NodePtr child) {
  if (auto c = constant(*child)) return literal(!*c);
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::kNot;
  n->children = {std::move(child)};
  return n;
}

// Constant subformulas collapse to true/false, so a pre-evaluation that settles the
// whole body is never expanded quantifier by quantifier. Slots are left untouched.
NodePtr fold(const NodePtr& node, bool has_vertices) {
  const Node& n = *node;
  switch (n.kind) {
    case NodeKind::kNot: {
      NodePtr c = fold(n.children[0], has_vertices);
      if (c == n.children[0]) return node;
      return negation(std::move(c));
    }
    case NodeKind::kAnd:
    case NodeKind::kOr:
    case NodeKind::kImplies:
    case NodeKind::kIff: {
      NodePtr a = fold(n.children[0], has_vertices);
      NodePtr b = fold(n.children[1], has_vertices);
      const auto ca = constant(*a), cb = constant(*b);
      switch (n.kind) {
        case NodeKind::kAnd:
          if (ca == false || cb == false) return literal(false);
          if (ca == true) return b;
          if (cb == true) return a;
          break;
        case NodeKind::kOr:
          if (ca == true || cb == true) return literal(true);
          if (ca == false) return b;
          if (cb == false) return a;
          break;
        case NodeKind::kImplies:
          if (ca == false || cb == true) return literal(true);
          if (ca == true) return b;
          if (cb == false) return negation(a);
          break;
        default:
          if (ca && cb) return literal(*ca == *cb);
          if (ca) return *ca ? b : negation(b);
          if (cb) return *cb ? a : negation(a);
          break;
      }
      if (a == n.children[0] && b == n.children[1]) return node;
      auto out = std::make_shared<Node>(n);
      out->children = {std::move(a), std::move(b)};
      return out;
    }
    case NodeKind::kExists:
    case NodeKind::kForall: {
      NodePtr body = fold(n.children[0], has_vertices);
      if (auto c = constant(*body)) {
        // Set quantifiers always range over at least the empty set.
        if (n.vars[0].sort == Sort::kSet || has_vertices) return body;
        return literal(n.kind == NodeKind::kForall);
      }
      if (body == n.children[0]) return node;
      auto out = std::make_shared<Node>(n);
      out->children = {std::move(body)};
      return out;
    }
    default: return node;
  }
}

}  // namespace

Evaluator::Evaluator(const Graph& g, const Formula& f, const MsoOptions& options)
    : g_(g),
      f_(f),
      options_(options),
      n_(g.num_vertices()),
      m_(f.prefix.size()),
      words_(std::max<std::size_t>(1, (g.num_vertices() + 63) / 64)),
      body_(fold(f.body, g.num_vertices() > 0)) {
  universe_mask_.assign(words_, 0);
  for (std::size_t v = 0; v < n_; ++v) universe_mask_[v >> 6] |= std::uint64_t{1} << (v & 63);
  set_value_.assign(static_cast<std::size_t>(f.set_slots) * words_, 0);
  set_known_.assign(static_cast<std::size_t>(f.set_slots) * words_, 0);
  vertex_value_.assign(static_cast<std::size_t>(f.vertex_slots), 0);
  for (std::size_t i = 0; i < m_; ++i) live_sets_.push_back(static_cast<int>(i));
  has_twin_.assign(n_, false);
  if (options_.symmetry) {
    for (auto& type : nd_partition(g).types) {
      if (type.size() < 2) continue;
      for (Vertex v : type) has_twin_[v] = true;
      twin_groups_.push_back(std::move(type));
    }
  }
}

void Evaluator::set_constraint_mode(ConstraintMode mode, const PreEvaluation* alpha) {
  if (mode == ConstraintMode::kAlpha && (!alpha || alpha->size() != f_.constraints.size()))
    throw InternalError("pre-evaluation size does not match the formula");
  constraint_mode_ = mode;
  alpha_ = alpha;
}

void Evaluator::clear_prefix() {
  std::fill(set_value_.begin(), set_value_.begin() + static_cast<std::ptrdiff_t>(m_ * words_), 0);
  std::fill(set_known_.begin(), set_known_.begin() + static_cast<std::ptrdiff_t>(m_ * words_), 0);
}

void Evaluator::assign_prefix_bit(std::size_t set, Vertex v, bool member) {
  const std::uint64_t bit = std::uint64_t{1} << (v & 63);
  std::uint64_t& val = set_value_[set * words_ + (v >> 6)];
  set_known_[set * words_ + (v >> 6)] |= bit;
  val = member ? (val | bit) : (val & ~bit);
}

void Evaluator::unassign_prefix_bit(std::size_t set, Vertex v) {
  const std::uint64_t bit = std::uint64_t{1} << (v & 63);
  set_known_[set * words_ + (v >> 6)] &= ~bit;
  set_value_[set * words_ + (v >> 6)] &= ~bit;
}

void Evaluator::assign_prefix(const PrefixAssignment& chi) {
  if (chi.sets.size() != m_) throw InternalError("prefix assignment has the wrong arity");
  for (std::size_t i = 0; i < m_; ++i) {
    if (chi.sets[i].universe() != n_) throw InternalError("prefix set over the wrong carrier");
    const auto& w = chi.sets[i].words();
    for (std::size_t k = 0; k < words_; ++k) {
      set_value_[i * words_ + k] = k < w.size() ? w[k] : 0;
      set_known_[i * words_ + k] = universe_mask_[k];
    }
  }
}

PrefixAssignment Evaluator::prefix_assignment(PrefixAssignment::Carrier carrier) const {
  PrefixAssignment chi;
  chi.carrier = carrier;
  for (std::size_t i = 0; i < m_; ++i) {
    VertexSet s(n_);
    for (Vertex v = 0; v < n_; ++v)
      if ((set_value_[i * words_ + (v >> 6)] >> (v & 63)) & 1U) s.insert(v);
    chi.sets.push_back(std::move(s));
  }
  return chi;
}

Truth Evaluator::evaluate() { return eval(*body_); }

void Evaluator::tick() {
  if (++nodes_ > options_.node_budget)
    throw BudgetExceeded("model-checking node budget of " + std::to_string(options_.node_budget) +
                         " exceeded");
}

Truth Evaluator::eval(const Node& n) {
  switch (n.kind) {
    case NodeKind::kTrue: return Truth::kTrue;
    case NodeKind::kFalse: return Truth::kFalse;
    case NodeKind::kMember: {
      const Vertex v = vertex_value_[static_cast<std::size_t>(n.vars[0].slot)];
      const std::size_t idx = static_cast<std::size_t>(n.vars[1].slot) * words_ + (v >> 6);
      if (((set_known_[idx] >> (v & 63)) & 1U) == 0) return Truth::kUnknown;
      return ((set_value_[idx] >> (v & 63)) & 1U) ? Truth::kTrue : Truth::kFalse;
    }
    case NodeKind::kAdjacent: {
      const Vertex u = vertex_value_[static_cast<std::size_t>(n.vars[0].slot)];
      const Vertex v = vertex_value_[static_cast<std::size_t>(n.vars[1].slot)];
      return g_.adjacent(u, v) ? Truth::kTrue : Truth::kFalse;
    }
    case NodeKind::kEqual: {
      if (n.vars[0].sort == Sort::kVertex) {
        return vertex_value_[static_cast<std::size_t>(n.vars[0].slot)] ==
                       vertex_value_[static_cast<std::size_t>(n.vars[1].slot)]
                   ? Truth::kTrue
                   : Truth::kFalse;
      }
      const std::uint64_t* va = value(n.vars[0].slot);
      const std::uint64_t* vb = value(n.vars[1].slot);
      const std::uint64_t* ka = known(n.vars[0].slot);
      const std::uint64_t* kb = known(n.vars[1].slot);
      bool unknown = false;
      for (std::size_t w = 0; w < words_; ++w) {
        const std::uint64_t both = ka[w] & kb[w];
        if ((va[w] ^ vb[w]) & both) return Truth::kFalse;
        if (both != universe_mask_[w]) unknown = true;
      }
      return unknown ? Truth::kUnknown : Truth::kTrue;
    }
    case NodeKind::kNot: return negate(eval(*n.children[0]));
    case NodeKind::kAnd: {
      const Truth a = eval(*n.children[0]);
      if (a == Truth::kFalse) return Truth::kFalse;
      const Truth b = eval(*n.children[1]);
      if (b == Truth::kFalse) return Truth::kFalse;
      return (a == Truth::kTrue && b == Truth::kTrue) ? Truth::kTrue : Truth::kUnknown;
    }
    case NodeKind::kOr: {
      const Truth a = eval(*n.children[0]);
      if (a == Truth::kTrue) return Truth::kTrue;
      const Truth b = eval(*n.children[1]);
      if (b == Truth::kTrue) return Truth::kTrue;
      return (a == Truth::kFalse && b == Truth::kFalse) ? Truth::kFalse : Truth::kUnknown;
    }
    case NodeKind::kImplies: {
      const Truth a = eval(*n.children[0]);
      if (a == Truth::kFalse) return Truth::kTrue;
      const Truth b = eval(*n.children[1]);
      if (b == Truth::kTrue) return Truth::kTrue;
      return (a == Truth::kTrue && b == Truth::kFalse) ? Truth::kFalse : Truth::kUnknown;
    }
    case NodeKind::kIff: {
      const Truth a = eval(*n.children[0]);
      if (a == Truth::kUnknown) return Truth::kUnknown;
      const Truth b = eval(*n.children[1]);
      if (b == Truth::kUnknown) return Truth::kUnknown;
      return a == b ? Truth::kTrue : Truth::kFalse;
    }
    case NodeKind::kExists:
    case NodeKind::kForall: return eval_quantifier(n);
    case NodeKind::kConstraint: return eval_constraint(n.constraint);
  }
  throw InternalError("unhandled node kind");
}

Truth Evaluator::eval_constraint(int index) {
  switch (constraint_mode_) {
    case ConstraintMode::kAlpha:
      return (*alpha_)[static_cast<std::size_t>(index)] ? Truth::kTrue : Truth::kFalse;
    case ConstraintMode::kUnknown: return Truth::kUnknown;
    case ConstraintMode::kNumeric: {
      std::vector<std::int64_t> sizes(m_);
      for (std::size_t i = 0; i < m_; ++i) {
        std::int64_t count = 0;
        for (std::size_t w = 0; w < words_; ++w) {
          if (set_known_[i * words_ + w] != universe_mask_[w]) return Truth::kUnknown;
          count += std::popcount(set_value_[i * words_ + w]);
        }
        sizes[i] = count;
      }
      return evaluate_constraint(f_.constraints[static_cast<std::size_t>(index)], sizes)
                 ? Truth::kTrue
                 : Truth::kFalse;
    }
    case ConstraintMode::kForbidden: break;
  }
  throw InternalError("linear constraint reached in a pure MSO evaluation");
}

std::vector<std::vector<Vertex>> Evaluator::symmetry_classes() {
  // Vertices without twins are alone in their class. Twins split further by their
  // (known, value) membership in every live set and by which live vertex variables they are.
  std::vector<std::vector<Vertex>> classes;
  for (Vertex v = 0; v < n_; ++v)
    if (!has_twin_[v]) classes.push_back({v});
  std::vector<std::pair<std::vector<std::uint8_t>, Vertex>> keyed;
  for (const auto& group : twin_groups_) {
    keyed.clear();
    for (Vertex v : group) {
      std::vector<std::uint8_t> key;
      key.reserve(live_sets_.size() + live_vertices_.size());
      const std::size_t w = v >> 6;
      const unsigned b = v & 63;
      for (int s : live_sets_) {
        const std::size_t at = static_cast<std::size_t>(s) * words_ + w;
        key.push_back(static_cast<std::uint8_t>(((set_known_[at] >> b) & 1U) * 2 + ((set_value_[at] >> b) & 1U)));
      }
      for (int x : live_vertices_) key.push_back(vertex_value_[static_cast<std::size_t>(x)] == v);
      keyed.emplace_back(std::move(key), v);
    }
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t i = 0; i < keyed.size(); ++i) {
      if (i == 0 || keyed[i].first != keyed[i - 1].first) classes.emplace_back();
      classes.back().push_back(keyed[i].second);
    }
  }
  return classes;
}

Truth Evaluator::eval_set_block(const Node& n) {
  const bool exists = n.kind == NodeKind::kExists;
  const Truth decisive = exists ? Truth::kTrue : Truth::kFalse;
  // A run of like set quantifiers is searched jointly, one vertex at a time with all of
  // the run's sets decided together, so partial evaluation can cut whole subtrees.
  std::vector<int> slots;
  const Node* cur = &n;
  while (cur->kind == n.kind && cur->vars[0].sort == Sort::kSet && slots.size() < 16) {
    slots.push_back(cur->vars[0].slot);
    cur = cur->children[0].get();
  }
  const Node& body = *cur;
  const std::uint32_t signatures = std::uint32_t{1} << slots.size();

  // Vertices of one symmetry class are interchangeable, so their signatures are taken in
  // nondecreasing order. Singletons go first; they tend to decide things early.
  std::vector<Vertex> order;
  std::vector<bool> continues_class;
  if (options_.symmetry) {
    auto classes = symmetry_classes();
    std::stable_sort(classes.begin(), classes.end(),
                     [](const auto& a, const auto& b) { return (a.size() > 1) < (b.size() > 1); });
    for (const auto& cls : classes)
      for (std::size_t i = 0; i < cls.size(); ++i) {
        order.push_back(cls[i]);
        continues_class.push_back(i > 0);
      }
  } else {
    for (Vertex v = 0; v < n_; ++v) order.push_back(v);
    continues_class.assign(n_, false);
  }

  for (int s : slots) {
    std::fill(value(s), value(s) + words_, 0);
    std::fill(known(s), known(s) + words_, 0);
    live_sets_.push_back(s);
  }
  std::vector<std::uint32_t> chosen(order.size(), 0);
  bool saw_unknown = false;

  auto assign = [&](Vertex v, std::uint32_t sig) {
    const std::uint64_t bit = std::uint64_t{1} << (v & 63);
    for (std::size_t i = 0; i < slots.size(); ++i) {
      known(slots[i])[v >> 6] |= bit;
      if ((sig >> i) & 1U) value(slots[i])[v >> 6] |= bit;
      else value(slots[i])[v >> 6] &= ~bit;
    }
  };
  auto unassign = [&](Vertex v) {
    const std::uint64_t bit = std::uint64_t{1} << (v & 63);
    for (int s : slots) {
      known(s)[v >> 6] &= ~bit;
      value(s)[v >> 6] &= ~bit;
    }
  };
  auto evaluate_at = [&](bool leaf) {
    shallow_ = !leaf;
    const Truth t = eval(body);
    shallow_ = false;
    return t;
  };

  auto dfs = [&](auto&& self, std::size_t pos) -> bool {
    if (pos == order.size()) {
      tick();
      const Truth t = evaluate_at(true);
      if (t == Truth::kUnknown) saw_unknown = true;
      return t == decisive;
    }
    const Vertex v = order[pos];
    const std::uint32_t first = continues_class[pos] ? chosen[pos - 1] : 0;
    const bool last = pos + 1 == order.size();
    for (std::uint32_t sig = first; sig < signatures; ++sig) {
      chosen[pos] = sig;
      assign(v, sig);
      bool found;
      if (last) {
        found = self(self, pos + 1);
      } else {
        tick();
        const Truth t = evaluate_at(false);
        // Kleene values only sharpen as bits get fixed.
        found = t == decisive || (t == Truth::kUnknown && self(self, pos + 1));
      }
      unassign(v);
      if (found) return true;
    }
    return false;
  };

  bool decided = false;
  if (order.empty()) {
    tick();
    const Truth t = evaluate_at(true);
    decided = t == decisive;
    saw_unknown = t == Truth::kUnknown;
  } else {
    const Truth root = evaluate_at(false);
    if (root == decisive) decided = true;
    else if (root == Truth::kUnknown) decided = dfs(dfs, 0);
  }

  for (auto it = slots.rbegin(); it != slots.rend(); ++it) {
    std::fill(value(*it), value(*it) + words_, 0);
    std::fill(known(*it), known(*it) + words_, 0);
    live_sets_.pop_back();
  }
  if (decided) return decisive;
  return saw_unknown ? Truth::kUnknown : negate(decisive);
}

Truth Evaluator::eval_quantifier(const Node& n) {
  const bool exists = n.kind == NodeKind::kExists;
  const Truth decisive = exists ? Truth::kTrue : Truth::kFalse;
  const int slot = n.vars[0].slot;
  const Node& body = *n.children[0];
  bool saw_unknown = false;
  if (shallow_ && n.vars[0].sort == Sort::kSet) return Truth::kUnknown;

  auto visit = [&]() -> bool {
    tick();
    const Truth t = eval(body);
    if (t == decisive) return true;
    if (t == Truth::kUnknown) saw_unknown = true;
    return false;
  };

  bool decided = false;
  if (n.vars[0].sort == Sort::kVertex) {
    std::vector<Vertex> candidates;
    if (options_.symmetry && !twin_groups_.empty()) {
      for (const auto& cls : symmetry_classes()) candidates.push_back(cls.front());
      std::sort(candidates.begin(), candidates.end());
    }
    live_vertices_.push_back(slot);
    const bool reps = !candidates.empty();
    const std::size_t count = reps ? candidates.size() : n_;
    for (std::size_t i = 0; i < count && !decided; ++i) {
      vertex_value_[static_cast<std::size_t>(slot)] = reps ? candidates[i] : static_cast<Vertex>(i);
      decided = visit();
    }
    live_vertices_.pop_back();
  } else {
    return eval_set_block(n);
  }
  if (decided) return decisive;
  return saw_unknown ? Truth::kUnknown : negate(decisive);
}

namespace {

class PrefixWalk {
 public:
  PrefixWalk(Evaluator& eval, const LeafVisitor& visit, PrefixOrder order,
             const std::vector<std::vector<Vertex>>* interchangeable)
      : eval_(eval), visit_(visit), order_(order), n_(eval.num_vertices()), m_(eval.prefix_size()),
        total_(m_ * n_) {
    if (!interchangeable) return;
    if (order_ != PrefixOrder::kVertexMajor) throw InternalError("canonical order needs vertex-major order");
    previous_.assign(n_, kNone);
    bits_.assign(total_, 0);
    for (auto cls : *interchangeable) {
      std::sort(cls.begin(), cls.end());
      for (std::size_t i = 1; i < cls.size(); ++i) previous_[cls[i]] = cls[i - 1];
    }
  }

  void run() {
    eval_.clear_prefix();
    eval_.set_shallow(total_ > 0);
    const Truth root = eval_.evaluate();
    if (root != Truth::kFalse) dfs(0, root);
    eval_.set_shallow(false);
  }

 private:
  bool dfs(std::size_t bit, Truth current) {
    if (bit == total_) return visit_(eval_, current);
    std::size_t set;
    Vertex v;
    if (order_ == PrefixOrder::kCounter) {
      set = bit / n_;
      v = static_cast<Vertex>(n_ - 1 - bit % n_);
    } else {
      set = bit % m_;
      v = static_cast<Vertex>(bit / m_);
    }
    const bool leaf = bit + 1 == total_;
    // Interchangeable vertices take nondecreasing signatures, compared from Z_1 on.
    bool floor = false;
    if (!previous_.empty() && previous_[v] != kNone) {
      const Vertex u = previous_[v];
      bool tied = true;
      for (std::size_t z = 0; z < set && tied; ++z) tied = bits_[v * m_ + z] == bits_[u * m_ + z];
      floor = tied && bits_[u * m_ + set];
    }
    for (bool member : {false, true}) {
      if (member < floor) continue;
      if (!bits_.empty()) bits_[v * m_ + set] = member;
      eval_.tick();
      eval_.assign_prefix_bit(set, v, member);
      // Kleene evaluation is monotone: a definite value survives every refinement. Inner
      // nodes skip set quantifiers; leaves are evaluated in full.
      Truth t = current;
      if (current == Truth::kUnknown) {
        eval_.set_shallow(!leaf);
        t = eval_.evaluate();
      }
      const bool keep_going = t == Truth::kFalse || dfs(bit + 1, t);
      eval_.unassign_prefix_bit(set, v);
      if (!keep_going) return false;
    }
    return true;
  }

  Evaluator& eval_;
  const LeafVisitor& visit_;
  PrefixOrder order_;
  std::size_t n_;
  std::size_t m_;
  std::size_t total_;
  static constexpr Vertex kNone = ~Vertex{0};
  std::vector<Vertex> previous_;     // preceding member of the vertex's class, if any
  std::vector<std::uint8_t> bits_;  // decided bits, vertex-major
};

}  // namespace

void enumerate_prefix(Evaluator& eval, const LeafVisitor& visit, PrefixOrder order,
                      const std::vector<std::vector<Vertex>>* interchangeable) {
  PrefixWalk(eval, visit, order, interchangeable).run();
}

}  // namespace cardmso::detail

#include <cctype>
#include <charconv>
#include <optional>
#include <string>
#include <vector>

#include "cardmso/errors.hpp"
#include "cardmso/formula.hpp"

namespace cardmso {
namespace {

enum class Tok {
  kIdent,
  kParam,
  kInt,
  kExists,
  kForall,
  kIn,
  kAdj,
  kTrue,
  kFalse,
  kAnd,
  kOr,
  kNot,
  kImplies,
  kIff,
  kEq,
  kLe,
  kLt,
  kGe,
  kGt,
  kPlus,
  kMinus,
  kLParen,
  kRParen,
  kLBracket,
  kRBracket,
  kComma,
  kDot,
  kBar,  // cardinality delimiter inside brackets
  kEnd,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  std::size_t line = 1;
  std::size_t line_start = 0;
  int bracket_depth = 0;
  auto push = [&](Tok kind, std::string text, std::size_t at) {
    out.push_back({kind, std::move(text), line, at - line_start + 1});
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++i;
      ++line;
      line_start = i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_' || src[i] == '\''))
        ++i;
      std::string word(src.substr(start, i - start));
      Tok kind = Tok::kIdent;
      if (word == "exists") kind = Tok::kExists;
      else if (word == "forall") kind = Tok::kForall;
      else if (word == "in") kind = Tok::kIn;
      else if (word == "adj") kind = Tok::kAdj;
      else if (word == "true") kind = Tok::kTrue;
      else if (word == "false") kind = Tok::kFalse;
      else if (word == "and") kind = Tok::kAnd;
      else if (word == "or") kind = Tok::kOr;
      else if (word == "not") kind = Tok::kNot;
      push(kind, std::move(word), start);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
      push(Tok::kInt, std::string(src.substr(start, i - start)), start);
      continue;
    }
    if (c == '$') {
      ++i;
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_'))
        ++i;
      if (i == start + 1) throw ParseError("expected parameter name after '$'", line, start - line_start + 1);
      push(Tok::kParam, std::string(src.substr(start + 1, i - start - 1)), start);
      continue;
    }
    auto next_is = [&](std::string_view s) { return src.substr(i, s.size()) == s; };
    if (next_is("<->")) {
      i += 3;
      push(Tok::kIff, "<->", start);
    } else if (next_is("->")) {
      i += 2;
      push(Tok::kImplies, "->", start);
    } else if (next_is("<=")) {
      i += 2;
      push(Tok::kLe, "<=", start);
    } else if (next_is(">=")) {
      i += 2;
      push(Tok::kGe, ">=", start);
    } else {
      ++i;
      switch (c) {
        case '<': push(Tok::kLt, "<", start); break;
        case '>': push(Tok::kGt, ">", start); break;
        case '=': push(Tok::kEq, "=", start); break;
        case '&': push(Tok::kAnd, "&", start); break;
        case '!': push(Tok::kNot, "!", start); break;
        case '+': push(Tok::kPlus, "+", start); break;
        case '-': push(Tok::kMinus, "-", start); break;
        case '(': push(Tok::kLParen, "(", start); break;
        case ')': push(Tok::kRParen, ")", start); break;
        case ',': push(Tok::kComma, ",", start); break;
        case '.':
        case ':': push(Tok::kDot, std::string(1, c), start); break;
        case '[':
          ++bracket_depth;
          push(Tok::kLBracket, "[", start);
          break;
        case ']':
          --bracket_depth;
          push(Tok::kRBracket, "]", start);
          break;
        case '|': push(bracket_depth > 0 ? Tok::kBar : Tok::kOr, "|", start); break;
        default:
          throw ParseError(std::string("unexpected character '") + c + "'", line,
                           start - line_start + 1);
      }
    }
  }
  out.push_back({Tok::kEnd, "", line, i - line_start + 1});
  return out;
}

Sort sort_of_name(const std::string& name) {
  return std::isupper(static_cast<unsigned char>(name.front())) ? Sort::kSet : Sort::kVertex;
}

struct Binding {
  std::string name;
  Sort sort;
  int slot;
  bool prefix;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

  Formula parse() {
    // Maximal leading block of existential set quantifiers forms the prefix.
    while (peek().kind == Tok::kExists) {
      std::size_t save = pos_;
      advance();
      std::vector<Token> names = parse_var_names();
      std::size_t taken = 0;
      while (taken < names.size() && sort_of_name(names[taken].text) == Sort::kSet) ++taken;
      if (taken == 0 || peek().kind == Tok::kIn) {
        pos_ = save;
        break;
      }
      for (std::size_t i = 0; i < taken; ++i) {
        declare(names[i], /*prefix=*/true);
        formula_.prefix.push_back(names[i].text);
      }
      if (taken < names.size()) {
        // The block ended inside this quantifier: remaining names start the body.
        std::vector<Token> rest(names.begin() + static_cast<std::ptrdiff_t>(taken), names.end());
        formula_.body = parse_quantifier_tail(NodeKind::kExists, rest);
        finish();
        return std::move(formula_);
      }
      expect(Tok::kDot, "'.' after quantified variables");
    }
    formula_.body = parse_formula();
    finish();
    return std::move(formula_);
  }

 private:
  void finish() {
    if (peek().kind != Tok::kEnd) fail("unexpected '" + peek().text + "'");
  }

  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& advance() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
  bool accept(Tok kind) {
    if (peek().kind != kind) return false;
    advance();
    return true;
  }
  const Token& expect(Tok kind, const std::string& what) {
    if (peek().kind != kind) fail("expected " + what);
    return advance();
  }
  [[noreturn]] void fail(const std::string& message) const {
    fail_at(peek(), message);
  }
  [[noreturn]] static void fail_at(const Token& t, const std::string& message) {
    throw ParseError(message, t.line, t.column);
  }

  std::vector<Token> parse_var_names() {
    std::vector<Token> names;
    names.push_back(expect(Tok::kIdent, "variable name"));
    while (true) {
      if (accept(Tok::kComma)) {
        names.push_back(expect(Tok::kIdent, "variable name"));
      } else if (peek().kind == Tok::kIdent) {
        names.push_back(advance());
      } else {
        break;
      }
    }
    return names;
  }

  VarRef declare(const Token& name, bool prefix) {
    for (const auto& b : scope_)
      if (b.name == name.text) fail_at(name, "variable '" + name.text + "' shadows an outer binding");
    Sort sort = sort_of_name(name.text);
    int slot = sort == Sort::kSet ? formula_.set_slots++ : formula_.vertex_slots++;
    scope_.push_back({name.text, sort, slot, prefix});
    return {name.text, sort, slot};
  }

  const Binding& lookup(const Token& name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->name == name.text) return *it;
    fail_at(name, "unbound variable '" + name.text + "'");
  }

  VarRef ref(const Token& name, std::optional<Sort> required = std::nullopt) const {
    const Binding& b = lookup(name);
    if (required && b.sort != *required) {
      fail_at(name, "'" + name.text + "' must be a " +
                        (*required == Sort::kSet ? "set" : "vertex") + " variable");
    }
    return {b.name, b.sort, b.slot};
  }

  static NodePtr make(NodeKind kind, std::vector<NodePtr> children = {}) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->children = std::move(children);
    return n;
  }

  NodePtr parse_formula() { return parse_iff(); }

  NodePtr parse_iff() {
    NodePtr left = parse_implies();
    while (accept(Tok::kIff)) left = make(NodeKind::kIff, {left, parse_implies()});
    return left;
  }

  NodePtr parse_implies() {
    NodePtr left = parse_or();
    if (accept(Tok::kImplies)) return make(NodeKind::kImplies, {left, parse_implies()});
    return left;
  }

  NodePtr parse_or() {
    NodePtr left = parse_and();
    while (accept(Tok::kOr)) left = make(NodeKind::kOr, {left, parse_and()});
    return left;
  }

  NodePtr parse_and() {
    NodePtr left = parse_unary();
    while (accept(Tok::kAnd)) left = make(NodeKind::kAnd, {left, parse_unary()});
    return left;
  }

  NodePtr parse_unary() {
    if (accept(Tok::kNot)) return make(NodeKind::kNot, {parse_unary()});
    if (peek().kind == Tok::kExists || peek().kind == Tok::kForall) {
      NodeKind kind = advance().kind == Tok::kExists ? NodeKind::kExists : NodeKind::kForall;
      return parse_quantifier_tail(kind, parse_var_names());
    }
    return parse_atom();
  }

  // After `exists|forall names`: optional `in X`, then '.' and a maximal body.
  NodePtr parse_quantifier_tail(NodeKind kind, const std::vector<Token>& names) {
    std::optional<VarRef> bound_set;
    if (accept(Tok::kIn)) {
      bound_set = ref(expect(Tok::kIdent, "set variable after 'in'"), Sort::kSet);
      for (const auto& n : names)
        if (sort_of_name(n.text) != Sort::kVertex)
          fail_at(n, "only vertex variables may be bounded by 'in'");
    }
    expect(Tok::kDot, "'.' after quantified variables");
    std::vector<VarRef> vars;
    for (const auto& n : names) vars.push_back(declare(n, false));
    NodePtr body = parse_formula();
    for (std::size_t i = 0; i < names.size(); ++i) scope_.pop_back();

    for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
      if (bound_set) {
        auto member = std::make_shared<Node>();
        member->kind = NodeKind::kMember;
        member->vars[0] = *it;
        member->vars[1] = *bound_set;
        body = make(kind == NodeKind::kExists ? NodeKind::kAnd : NodeKind::kImplies,
                    {member, body});
      }
      auto q = std::make_shared<Node>();
      q->kind = kind;
      q->vars[0] = *it;
      q->children = {body};
      body = q;
    }
    return body;
  }

  NodePtr parse_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::kTrue: advance(); return make(NodeKind::kTrue);
      case Tok::kFalse: advance(); return make(NodeKind::kFalse);
      case Tok::kLParen: {
        advance();
        NodePtr inner = parse_formula();
        expect(Tok::kRParen, "')'");
        return inner;
      }
      case Tok::kAdj: {
        advance();
        expect(Tok::kLParen, "'(' after adj");
        auto n = std::make_shared<Node>();
        n->kind = NodeKind::kAdjacent;
        n->vars[0] = ref(expect(Tok::kIdent, "vertex variable"), Sort::kVertex);
        expect(Tok::kComma, "','");
        n->vars[1] = ref(expect(Tok::kIdent, "vertex variable"), Sort::kVertex);
        expect(Tok::kRParen, "')'");
        return n;
      }
      case Tok::kLBracket: return parse_constraint();
      case Tok::kIdent: {
        const Token& name = advance();
        auto n = std::make_shared<Node>();
        if (accept(Tok::kIn)) {
          n->kind = NodeKind::kMember;
          n->vars[0] = ref(name, Sort::kVertex);
          n->vars[1] = ref(expect(Tok::kIdent, "set variable after 'in'"), Sort::kSet);
          return n;
        }
        if (accept(Tok::kEq)) {
          n->kind = NodeKind::kEqual;
          n->vars[0] = ref(name);
          const Token& other = expect(Tok::kIdent, "variable after '='");
          n->vars[1] = ref(other, n->vars[0].sort);
          return n;
        }
        fail("expected 'in' or '=' after '" + name.text + "'");
      }
      default: fail("expected a formula, got '" + t.text + "'");
    }
  }

  Rho parse_rho() {
    Rho rho;
    rho.push_back(parse_rho_term(false));
    while (true) {
      if (accept(Tok::kPlus)) {
        rho.push_back(parse_rho_term(false));
      } else if (peek().kind == Tok::kMinus && peek(1).kind == Tok::kInt) {
        advance();
        rho.push_back(parse_rho_term(true));
      } else {
        break;
      }
    }
    return rho;
  }

  RhoTerm parse_rho_term(bool negated) {
    if (!negated && accept(Tok::kMinus)) return parse_rho_term(true);
    const Token& t = peek();
    RhoTerm term;
    if (t.kind == Tok::kInt) {
      advance();
      std::int64_t value = 0;
      auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
      if (ec != std::errc{}) fail_at(t, "integer out of range");
      term.kind = RhoTerm::Kind::kConstant;
      term.value = negated ? -value : value;
      return term;
    }
    if (negated) fail("only integer constants may be negated");
    if (t.kind == Tok::kParam) {
      advance();
      term.kind = RhoTerm::Kind::kParameter;
      term.name = t.text;
      return term;
    }
    if (accept(Tok::kBar)) {
      const Token& name = expect(Tok::kIdent, "set variable inside |...|");
      const Binding& b = lookup(name);
      if (b.sort != Sort::kSet) fail_at(name, "'" + name.text + "' is not a set variable");
      if (!b.prefix) {
        fail_at(name, "linear constraints may only mention prefix variables, not '" + name.text +
                          "'");
      }
      expect(Tok::kBar, "closing '|'");
      term.kind = RhoTerm::Kind::kCardinality;
      term.name = b.name;
      term.prefix_index = b.slot;
      return term;
    }
    fail("expected an integer, $parameter or |X| term");
  }

  NodePtr constraint_leaf(Rho lhs, Rho rhs) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::kConstraint;
    n->constraint = static_cast<int>(formula_.constraints.size());
    formula_.constraints.push_back({std::move(lhs), std::move(rhs)});
    return n;
  }

  NodePtr parse_constraint() {
    expect(Tok::kLBracket, "'['");
    Rho lhs = parse_rho();
    const Token& rel = advance();
    Rho rhs = parse_rho();
    expect(Tok::kRBracket, "']'");
    switch (rel.kind) {
      case Tok::kLe: return constraint_leaf(lhs, rhs);
      case Tok::kGe: return constraint_leaf(rhs, lhs);
      case Tok::kEq: {
        NodePtr first = constraint_leaf(lhs, rhs);
        NodePtr second = constraint_leaf(rhs, lhs);
        return make(NodeKind::kAnd, {first, second});
      }
      case Tok::kLt: {
        NodePtr first = constraint_leaf(lhs, rhs);
        NodePtr second = constraint_leaf(rhs, lhs);
        return make(NodeKind::kAnd, {first, make(NodeKind::kNot, {second})});
      }
      case Tok::kGt: {
        NodePtr first = constraint_leaf(rhs, lhs);
        NodePtr second = constraint_leaf(lhs, rhs);
        return make(NodeKind::kAnd, {first, make(NodeKind::kNot, {second})});
      }
      default: fail_at(rel, "expected '<=', '<', '=', '>=' or '>' in constraint");
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::vector<Binding> scope_;
  Formula formula_;
};

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).parse(); }

}  // namespace cardmso

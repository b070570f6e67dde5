#include "cardmso/ilp.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "cardmso/errors.hpp"

namespace cardmso {

std::size_t IlpInstance::add_variable(std::string name, std::int64_t lower, std::int64_t upper) {
  variables_.push_back({std::move(name), lower, upper});
  return variables_.size() - 1;
}

void IlpInstance::add_constraint(IlpConstraint c) { constraints_.push_back(std::move(c)); }

void IlpInstance::add_constraint(std::vector<IlpTerm> terms, Relation rel, std::int64_t rhs) {
  constraints_.push_back({std::move(terms), rel, rhs});
}

void IlpInstance::set_objective(std::vector<IlpTerm> terms) { objective_ = std::move(terms); }

namespace {

constexpr std::int64_t kMagnitudeLimit = std::int64_t{1} << 61;

std::int64_t magnitude(const std::vector<IlpTerm>& terms, const std::vector<IlpVariable>& vars) {
  // Saturating sum of |coef| * max(|lower|, |upper|).
  std::int64_t total = 0;
  for (const auto& t : terms) {
    if (t.var >= vars.size()) throw InputError("constraint references undeclared variable #" + std::to_string(t.var));
    const std::int64_t bound = std::max(std::abs(vars[t.var].lower), std::abs(vars[t.var].upper));
    const std::int64_t coef = std::abs(t.coef);
    if (coef != 0 && bound > kMagnitudeLimit / coef) return kMagnitudeLimit;
    total += coef * bound;
    if (total >= kMagnitudeLimit) return kMagnitudeLimit;
  }
  return total;
}

}  // namespace

void IlpInstance::validate() const {
  for (const auto& v : variables_) {
    if (v.lower > v.upper) throw InputError("variable " + v.name + " has lower bound above upper bound");
    if (std::abs(v.lower) >= kMagnitudeLimit || std::abs(v.upper) >= kMagnitudeLimit)
      throw InputError("bounds of " + v.name + " are too large");
  }
  for (const auto& c : constraints_) {
    if (magnitude(c.terms, variables_) >= kMagnitudeLimit || std::abs(c.rhs) >= kMagnitudeLimit)
      throw InputError("constraint coefficients too large");
  }
  if (objective_ && magnitude(*objective_, variables_) >= kMagnitudeLimit)
    throw InputError("objective coefficients too large");
}

namespace {

std::int64_t activity(const std::vector<IlpTerm>& terms, const std::vector<std::int64_t>& values) {
  std::int64_t sum = 0;
  for (const auto& t : terms) sum += t.coef * values[t.var];
  return sum;
}

}  // namespace

bool IlpInstance::satisfied_by(const std::vector<std::int64_t>& values) const {
  if (values.size() != variables_.size()) return false;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] < variables_[i].lower || values[i] > variables_[i].upper) return false;
  for (const auto& c : constraints_) {
    const std::int64_t a = activity(c.terms, values);
    switch (c.rel) {
      case Relation::kLessEqual: if (a > c.rhs) return false; break;
      case Relation::kEqual: if (a != c.rhs) return false; break;
      case Relation::kGreaterEqual: if (a < c.rhs) return false; break;
    }
  }
  return true;
}

std::int64_t IlpInstance::objective_value(const std::vector<std::int64_t>& values) const {
  return objective_ ? activity(*objective_, values) : 0;
}

const char* to_string(Relation r) {
  switch (r) {
    case Relation::kLessEqual: return "<=";
    case Relation::kEqual: return "=";
    case Relation::kGreaterEqual: return ">=";
  }
  return "?";
}

const char* to_string(IlpStatus s) {
  switch (s) {
    case IlpStatus::kFeasible: return "feasible";
    case IlpStatus::kInfeasible: return "infeasible";
    case IlpStatus::kOptimal: return "optimal";
  }
  return "?";
}

std::string IlpInstance::dump() const {
  std::ostringstream out;
  auto terms = [&](const std::vector<IlpTerm>& ts) {
    if (ts.empty()) out << '0';
    for (std::size_t i = 0; i < ts.size(); ++i)
      out << (i ? " " : "") << ts[i].coef << '*' << variables_.at(ts[i].var).name;
  };
  for (const auto& v : variables_) out << "# " << v.lower << " <= " << v.name << " <= " << v.upper << '\n';
  if (objective_) {
    out << "# minimize ";
    terms(*objective_);
    out << '\n';
  }
  for (const auto& c : constraints_) {
    terms(c.terms);
    out << ' ' << to_string(c.rel) << ' ' << c.rhs << '\n';
  }
  return out.str();
}

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
  return q;
}

// sum(terms) <= rhs
struct Row {
  std::vector<IlpTerm> terms;
  std::int64_t rhs = 0;
};

struct Domain {
  std::int64_t lo;
  std::int64_t hi;
};

constexpr std::int64_t kBisectAbove = 16;
constexpr int kMaxPropagationPasses = 1000;

class BranchAndBound {
 public:
  BranchAndBound(const IlpInstance& inst, const IlpOptions& options, bool minimize)
      : inst_(inst), options_(options), minimize_(minimize) {
    for (const auto& c : inst.constraints()) {
      std::vector<IlpTerm> neg = c.terms;
      for (auto& t : neg) t.coef = -t.coef;
      if (c.rel != Relation::kGreaterEqual) rows_.push_back({c.terms, c.rhs});
      if (c.rel != Relation::kLessEqual) rows_.push_back({std::move(neg), -c.rhs});
    }
    if (minimize_) rows_.push_back({*inst.objective(), 0});  // rhs set once an incumbent exists
  }

  IlpResult run() {
    std::vector<Domain> d;
    for (const auto& v : inst_.variables()) d.push_back({v.lower, v.upper});
    search(d);
    IlpResult r;
    r.nodes = nodes_;
    if (!best_) return r;
    if (!inst_.satisfied_by(*best_)) throw InternalError("ILP solver produced an invalid assignment");
    r.values = *best_;
    r.objective_value = inst_.objective_value(*best_);
    r.status = minimize_ ? IlpStatus::kOptimal : IlpStatus::kFeasible;
    return r;
  }

 private:
  bool row_active(std::size_t i) const { return !(minimize_ && i + 1 == rows_.size() && !best_); }

  bool propagate(std::vector<Domain>& d) const {
    for (int pass = 0; pass < kMaxPropagationPasses; ++pass) {
      bool changed = false;
      for (std::size_t r = 0; r < rows_.size(); ++r) {
        if (!row_active(r)) continue;
        const Row& row = rows_[r];
        std::int64_t min_act = 0;
        for (const auto& t : row.terms) min_act += t.coef > 0 ? t.coef * d[t.var].lo : t.coef * d[t.var].hi;
        if (min_act > row.rhs) return false;
        for (const auto& t : row.terms) {
          if (t.coef == 0) continue;
          Domain& x = d[t.var];
          const std::int64_t own = t.coef > 0 ? t.coef * x.lo : t.coef * x.hi;
          const std::int64_t slack = row.rhs - (min_act - own);
          if (t.coef > 0) {
            const std::int64_t hi = floor_div(slack, t.coef);
            if (hi < x.hi) {
              x.hi = hi;
              changed = true;
            }
          } else {
            const std::int64_t lo = ceil_div(slack, t.coef);
            if (lo > x.lo) {
              x.lo = lo;
              changed = true;
            }
          }
          if (x.lo > x.hi) return false;
          min_act = min_act - own + (t.coef > 0 ? t.coef * x.lo : t.coef * x.hi);
        }
      }
      if (!changed) break;
    }
    return true;
  }

  // Returns true to stop the whole search.
  bool search(std::vector<Domain>& d) {
    if (++nodes_ > options_.node_budget)
      throw BudgetExceeded("ILP node budget of " + std::to_string(options_.node_budget) + " exceeded");
    if (!propagate(d)) return false;

    std::size_t pick = d.size();
    std::int64_t width = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      const std::int64_t w = d[i].hi - d[i].lo;
      if (w > 0 && (pick == d.size() || w < width)) {
        pick = i;
        width = w;
      }
    }
    if (pick == d.size()) {
      std::vector<std::int64_t> values;
      for (const auto& x : d) values.push_back(x.lo);
      if (!inst_.satisfied_by(values)) throw InternalError("propagation accepted an infeasible point");
      best_ = std::move(values);
      if (!minimize_) return true;
      rows_.back().rhs = inst_.objective_value(*best_) - 1;
      return false;
    }

    const Domain saved = d[pick];
    if (width + 1 <= kBisectAbove) {
      for (std::int64_t v = saved.lo; v <= saved.hi; ++v) {
        std::vector<Domain> child = d;
        child[pick] = {v, v};
        if (search(child)) return true;
      }
    } else {
      const std::int64_t mid = saved.lo + width / 2;
      for (Domain half : {Domain{saved.lo, mid}, Domain{mid + 1, saved.hi}}) {
        std::vector<Domain> child = d;
        child[pick] = half;
        if (search(child)) return true;
      }
    }
    return false;
  }

  const IlpInstance& inst_;
  IlpOptions options_;
  bool minimize_;
  std::vector<Row> rows_;
  std::optional<std::vector<std::int64_t>> best_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

IlpResult solve_feasibility(const IlpInstance& inst, const IlpOptions& options) {
  inst.validate();
  return BranchAndBound(inst, options, false).run();
}

IlpResult solve_min(const IlpInstance& inst, const IlpOptions& options) {
  if (!inst.objective()) throw InputError("solve_min needs an objective");
  inst.validate();
  return BranchAndBound(inst, options, true).run();
}

}  // namespace cardmso

#include "cardmso/partitioning.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>

#include "cardmso/errors.hpp"

namespace cardmso {

bool Shape::is_empty() const {
  return std::all_of(per_type.begin(), per_type.end(), [](std::int64_t c) { return c == 0; });
}

namespace {

// Options for one type: 0..min(|T|, small), then kTop if |T| > small.
std::vector<std::int64_t> type_options(std::size_t size, std::uint64_t small) {
  std::vector<std::int64_t> out;
  const std::uint64_t exact = std::min<std::uint64_t>(size, small);
  for (std::uint64_t c = 0; c <= exact; ++c) out.push_back(static_cast<std::int64_t>(c));
  if (size > small) out.push_back(Shape::kTop);
  return out;
}

}  // namespace

std::uint64_t shape_count_bound(const TypePartition& tp, const FormulaStats& stats) {
  const std::uint64_t small = stats.small_threshold();
  std::uint64_t bound = 1;
  for (const auto& type : tp.types) {
    const std::uint64_t options = std::min<std::uint64_t>(type.size(), small) + 1 + (type.size() > small ? 1 : 0);
    if (bound > UINT64_MAX / options) return UINT64_MAX;
    bound *= options;
  }
  return bound;
}

std::vector<Shape> enumerate_shapes(const TypePartition& tp, const FormulaStats& stats, std::uint64_t budget) {
  const std::uint64_t small = stats.small_threshold();
  if (shape_count_bound(tp, stats) > budget)
    throw BudgetExceeded("more than " + std::to_string(budget) + " shapes");
  std::vector<std::vector<std::int64_t>> options;
  for (const auto& type : tp.types) options.push_back(type_options(type.size(), small));

  std::vector<Shape> out;
  std::vector<std::size_t> digit(options.size(), 0);
  while (true) {
    Shape s;
    for (std::size_t t = 0; t < options.size(); ++t) s.per_type.push_back(options[t][digit[t]]);
    out.push_back(std::move(s));
    std::size_t t = 0;
    while (t < digit.size() && digit[t] + 1 == options[t].size()) digit[t++] = 0;
    if (t == digit.size()) break;
    ++digit[t];
  }
  return out;
}

VertexSet shape_representative(const TypePartition& tp, const Shape& s, const FormulaStats& stats,
                               std::size_t variant) {
  if (s.per_type.size() != tp.num_types()) throw InputError("shape does not match the type partition");
  const std::uint64_t small = stats.small_threshold();
  std::size_t n = 0;
  for (const auto& type : tp.types) n += type.size();
  VertexSet out(n);
  for (std::size_t t = 0; t < tp.num_types(); ++t) {
    const auto& type = tp.types[t];
    std::uint64_t count;
    if (s.is_top(t)) {
      if (type.size() <= small) throw InternalError("top entry on a type at or below the small threshold");
      count = small + 1;
    } else {
      count = static_cast<std::uint64_t>(s.per_type[t]);
      if (count > type.size() || count > small) throw InternalError("shape count out of range");
    }
    for (std::uint64_t j = 0; j < count; ++j) out.insert(type[(variant + j) % type.size()]);
  }
  return out;
}

bool shape_satisfies(const Graph& g, const TypePartition& tp, const Shape& s, const Formula& phi,
                     const FormulaStats& stats, const MsoOptions& options) {
  const VertexSet x = shape_representative(tp, s, stats);
  const auto members = x.members();
  return mso_check(g.induced_subgraph(members), phi, options);
}

namespace {

std::vector<bool> check_shapes(const Graph& g, const TypePartition& tp, const std::vector<Shape>& shapes,
                               const Formula& phi, const FormulaStats& stats, const PartitionOptions& options) {
  std::vector<char> sat(shapes.size(), 0);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    try {
      for (std::size_t i = next++; i < shapes.size(); i = next++) {
        if (!options.allow_empty && shapes[i].is_empty()) continue;
        sat[i] = shape_satisfies(g, tp, shapes[i], phi, stats, options.mso) ? 1 : 0;
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = shapes.size();
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(options.threads, shapes.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return {sat.begin(), sat.end()};
}

}  // namespace

PartitionResult mso_partition(const Graph& g, const Formula& phi_in, std::size_t r,
                              const PartitionOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (r == 0) throw InputError("number of parts must be at least 1");
  const Formula phi = as_closed_sentence(phi_in);
  const FormulaStats stats = analyze(phi);
  const std::uint64_t small = stats.small_threshold();

  PartitionResult result;
  TypePartition tp;
  if (options.mode == PartitionMode::kVertexCover) {
    const VertexCover cover = min_vertex_cover(g, options.k_max);
    result.stats.cover_size = cover.size;
    tp = type_partition(g, cover);
  } else {
    tp = nd_partition(g);
  }
  result.stats.types = tp.num_types();

  const std::vector<Shape> shapes = enumerate_shapes(tp, stats, options.shape_budget);
  result.stats.shapes = shapes.size();
  const std::vector<bool> sat = check_shapes(g, tp, shapes, phi, stats, options);

  IlpInstance ilp;
  std::vector<std::size_t> used;  // shape index per ILP variable
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    if (!sat[i]) continue;
    used.push_back(i);
    ilp.add_variable("x_" + std::to_string(i), 0, static_cast<std::int64_t>(r));
  }
  result.stats.satisfying_shapes = used.size();
  {
    std::vector<IlpTerm> all;
    for (std::size_t v = 0; v < used.size(); ++v) all.push_back({v, 1});
    ilp.add_constraint(std::move(all), Relation::kEqual, static_cast<std::int64_t>(r));
  }
  for (std::size_t t = 0; t < tp.num_types(); ++t) {
    const auto size = static_cast<std::int64_t>(tp.types[t].size());
    std::vector<IlpTerm> fit, cover;
    for (std::size_t v = 0; v < used.size(); ++v) {
      const Shape& s = shapes[used[v]];
      if (s.is_top(t)) {
        fit.push_back({v, static_cast<std::int64_t>(small)});
        cover.push_back({v, size});
      } else if (s.per_type[t] > 0) {
        fit.push_back({v, s.per_type[t]});
        cover.push_back({v, s.per_type[t]});
      }
    }
    ilp.add_constraint(std::move(fit), Relation::kLessEqual, size);
    ilp.add_constraint(std::move(cover), Relation::kGreaterEqual, size);
  }

  const IlpResult solved = solve_feasibility(ilp, options.ilp);
  if (options.on_ilp) options.on_ilp(ilp, solved);
  result.stats.ilp_nodes = solved.nodes;
  if (solved.status != IlpStatus::kInfeasible) {
    result.holds = true;
    std::vector<const Shape*> part_shapes;
    for (std::size_t v = 0; v < used.size(); ++v)
      for (std::int64_t k = 0; k < solved.values[v]; ++k) part_shapes.push_back(&shapes[used[v]]);
    result.parts.assign(part_shapes.size(), VertexSet(g.num_vertices()));
    for (std::size_t t = 0; t < tp.num_types(); ++t) {
      const auto& type = tp.types[t];
      std::size_t at = 0;
      std::size_t leftovers_to = part_shapes.size();
      for (std::size_t p = 0; p < part_shapes.size(); ++p) {
        const Shape& s = *part_shapes[p];
        const std::uint64_t take = s.is_top(t) ? small : static_cast<std::uint64_t>(s.per_type[t]);
        if (s.is_top(t) && leftovers_to == part_shapes.size()) leftovers_to = p;
        for (std::uint64_t j = 0; j < take; ++j) {
          if (at >= type.size()) throw InternalError("partition ILP overfilled a type");
          result.parts[p].insert(type[at++]);
        }
      }
      if (at < type.size()) {
        if (leftovers_to == part_shapes.size()) throw InternalError("partition ILP left vertices unmapped");
        while (at < type.size()) result.parts[leftovers_to].insert(type[at++]);
      }
    }
  }
  result.stats.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace cardmso

#include "cardmso/cli.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cardmso/balanced.hpp"
#include "cardmso/cardmso_solver.hpp"
#include "cardmso/corpus.hpp"
#include "cardmso/errors.hpp"
#include "cardmso/graph.hpp"
#include "cardmso/oracle.hpp"
#include "cardmso/partitioning.hpp"

namespace cardmso::cli {

namespace {

using Json = nlohmann::ordered_json;

struct RunConfig {
  std::string graph_path;
  std::string formula_path;
  std::size_t r = 0;
  std::size_t c = 0;
  std::vector<std::string> params;
  std::string mode = "vc";
  std::size_t k_max = kDefaultKMax;
  bool json = false;
  std::string dump_ilp;
  bool no_empty_parts = false;
  bool no_dedup = false;
  std::size_t threads = 1;
  std::uint64_t node_budget = kDefaultIlpNodeBudget;
  std::size_t cap = oracle::kDefaultCap;
  std::string corpus_name;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Graph load_graph(const RunConfig& cfg) { return parse_graph(read_file(cfg.graph_path)); }

Formula load_formula(const RunConfig& cfg, std::ostream& err) {
  std::map<std::string, std::int64_t> bindings;
  for (const auto& p : cfg.params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) throw InputError("--param expects NAME=INT, got '" + p + "'");
    std::string name = p.substr(0, eq);
    if (name.front() == '$') name.erase(0, 1);
    std::int64_t value = 0;
    std::size_t used = 0;
    try {
      value = std::stoll(p.substr(eq + 1), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != p.size() - eq - 1) throw InputError("--param value for " + name + " is not an integer");
    bindings[name] = value;
  }
  Formula f = parse_formula(read_file(cfg.formula_path));
  std::vector<std::string> unused;
  f = substitute_params(f, bindings, &unused);
  for (const auto& name : unused) err << "warning: parameter " << name << " does not occur in the formula\n";
  return f;
}

PartitionMode parse_mode(const std::string& mode) {
  return mode == "nd" ? PartitionMode::kNeighborhoodDiversity : PartitionMode::kVertexCover;
}

// Collects every ILP for --dump-ilp.
class IlpLog {
 public:
  explicit IlpLog(const std::string& path) : path_(path) {}

  std::function<void(const IlpInstance&, const IlpResult&)> callback() {
    if (path_.empty()) return {};
    return [this](const IlpInstance& inst, const IlpResult& r) {
      text_ << "# ilp " << ++count_ << ": " << to_string(r.status) << ", " << r.nodes << " nodes\n" << inst.dump() << '\n';
    };
  }

  void flush() const {
    if (path_.empty()) return;
    std::ofstream out(path_);
    if (!out) throw InputError("cannot write " + path_);
    out << text_.str();
  }

 private:
  std::string path_;
  std::ostringstream text_;
  std::size_t count_ = 0;
};

std::vector<std::string> set_names(const Graph& g, const VertexSet& s) {
  std::vector<std::string> out;
  for (Vertex v : s.members()) out.push_back(g.name(v));
  return out;
}

std::string join(const std::vector<std::string>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? " " : "") + xs[i];
  return s;
}

Json check_stats_json(const CheckStats& s) {
  Json j;
  j["types"] = s.types;
  j["cover_size"] = s.cover_size;
  j["reduced_vertices"] = s.reduced_vertices;
  j["pre_evaluations_tried"] = s.pre_evaluations_tried;
  j["prefix_assignments"] = s.prefix_assignments;
  j["ilp_solves"] = s.ilp_solves;
  j["dedup_skips"] = s.dedup_skips;
  j["elapsed_seconds"] = s.elapsed_seconds;
  return j;
}

int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Graph g = load_graph(cfg);
  const Formula f = load_formula(cfg, err);
  IlpLog log(cfg.dump_ilp);
  CheckOptions opt;
  opt.mode = parse_mode(cfg.mode);
  opt.k_max = cfg.k_max;
  opt.dedup = !cfg.no_dedup;
  opt.ilp.node_budget = cfg.node_budget;
  opt.on_ilp = log.callback();
  const Verdict v = check(g, f, opt);
  log.flush();
  if (v.holds && !validate_witness(g, f, *v.witness)) throw InternalError("witness failed to re-validate");

  if (cfg.json) {
    Json j;
    j["command"] = "check";
    j["status"] = v.holds ? "holds" : "fails";
    Json w = nullptr;
    Json alpha = nullptr;
    if (v.witness) {
      w = Json::object();
      for (std::size_t i = 0; i < f.prefix.size(); ++i) w[f.prefix[i]] = set_names(g, v.witness->chi.sets[i]);
      alpha = Json::array();
      for (bool b : v.witness->alpha.values) alpha.push_back(b);
    }
    j["witness"] = w;
    j["alpha"] = alpha;
    j["stats"] = check_stats_json(v.stats);
    out << j.dump(2) << '\n';
  } else {
    out << (v.holds ? "holds" : "fails") << '\n';
    if (v.witness) {
      for (std::size_t i = 0; i < f.prefix.size(); ++i)
        out << f.prefix[i] << ": " << join(set_names(g, v.witness->chi.sets[i])) << '\n';
      if (!v.witness->alpha.values.empty()) {
        out << "alpha:";
        for (bool b : v.witness->alpha.values) out << ' ' << (b ? 'T' : 'F');
        out << '\n';
      }
    }
    out << "types " << v.stats.types << ", reduced to " << v.stats.reduced_vertices << " vertices, "
        << v.stats.ilp_solves << " ILP solves, " << v.stats.elapsed_seconds << " s\n";
  }
  return v.holds ? kHolds : kFails;
}

void print_parts(std::ostream& out, const Graph& g, const std::vector<VertexSet>& parts) {
  for (std::size_t i = 0; i < parts.size(); ++i) out << "part " << i + 1 << ": " << join(set_names(g, parts[i])) << '\n';
}

Json parts_json(const Graph& g, const std::vector<VertexSet>& parts) {
  Json a = Json::array();
  for (const auto& p : parts) a.push_back(set_names(g, p));
  return a;
}

int cmd_partition(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Graph g = load_graph(cfg);
  const Formula f = load_formula(cfg, err);
  IlpLog log(cfg.dump_ilp);
  PartitionOptions opt;
  opt.mode = parse_mode(cfg.mode);
  opt.k_max = cfg.k_max;
  opt.allow_empty = !cfg.no_empty_parts;
  opt.threads = cfg.threads;
  opt.ilp.node_budget = cfg.node_budget;
  opt.on_ilp = log.callback();
  const PartitionResult res = mso_partition(g, f, cfg.r, opt);
  log.flush();

  if (cfg.json) {
    Json j;
    j["command"] = "partition";
    j["status"] = res.holds ? "holds" : "fails";
    j["parts"] = res.holds ? parts_json(g, res.parts) : Json(nullptr);
    Json s;
    s["types"] = res.stats.types;
    s["cover_size"] = res.stats.cover_size;
    s["shapes"] = res.stats.shapes;
    s["satisfying_shapes"] = res.stats.satisfying_shapes;
    s["ilp_nodes"] = res.stats.ilp_nodes;
    s["elapsed_seconds"] = res.stats.elapsed_seconds;
    j["stats"] = s;
    out << j.dump(2) << '\n';
  } else {
    out << (res.holds ? "holds" : "fails") << '\n';
    if (res.holds) print_parts(out, g, res.parts);
    out << res.stats.shapes << " shapes, " << res.stats.satisfying_shapes << " satisfying, "
        << res.stats.elapsed_seconds << " s\n";
  }
  return res.holds ? kHolds : kFails;
}

int cmd_cbalance(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  if (cfg.mode != "vc") throw InputError("cbalance supports --mode vc only");
  const Graph g = load_graph(cfg);
  IlpLog log(cfg.dump_ilp);
  BalancedOptions opt;
  opt.k_max = cfg.k_max;
  opt.allow_empty = !cfg.no_empty_parts;
  opt.dedup = !cfg.no_dedup;
  opt.ilp.node_budget = cfg.node_budget;
  opt.on_ilp = log.callback();
  const BalancedResult res = cbalanced(g, cfg.c, opt);
  log.flush();

  if (cfg.json) {
    Json j;
    j["command"] = "cbalance";
    j["status"] = res.feasible ? "optimal" : "infeasible";
    j["cut_value"] = res.feasible ? Json(res.cut_value) : Json(nullptr);
    j["parts"] = res.feasible ? parts_json(g, res.parts) : Json(nullptr);
    j["stats"] = check_stats_json(res.stats);
    out << j.dump(2) << '\n';
  } else if (res.feasible) {
    out << "cut " << res.cut_value << '\n';
    print_parts(out, g, res.parts);
  } else {
    out << "infeasible\n";
  }
  return res.feasible ? kHolds : kFails;
}

int cmd_oracle(const std::string& which, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Graph g = load_graph(cfg);
  Json j;
  j["command"] = "oracle " + which;
  int code = kFails;
  if (which == "cbalance") {
    const auto cut = oracle::brute_cbalanced(g, cfg.c, !cfg.no_empty_parts, cfg.cap);
    j["status"] = cut ? "optimal" : "infeasible";
    j["cut_value"] = cut ? Json(*cut) : Json(nullptr);
    if (!cfg.json) out << (cut ? "cut " + std::to_string(*cut) : std::string("infeasible")) << '\n';
    code = cut ? kHolds : kFails;
  } else {
    const Formula f = load_formula(cfg, err);
    const bool holds = which == "check" ? oracle::brute_check(g, f, cfg.cap)
                                        : oracle::brute_partition(g, as_closed_sentence(f), cfg.r,
                                                                  !cfg.no_empty_parts, cfg.cap);
    j["status"] = holds ? "holds" : "fails";
    if (!cfg.json) out << (holds ? "holds" : "fails") << '\n';
    code = holds ? kHolds : kFails;
  }
  if (cfg.json) out << j.dump(2) << '\n';
  return code;
}

void add_common(CLI::App* cmd, RunConfig& cfg, bool formula, bool search) {
  cmd->add_option("--graph", cfg.graph_path, "graph file")->required()->check(CLI::ExistingFile);
  if (formula) {
    cmd->add_option("--formula", cfg.formula_path, "formula file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--param", cfg.params, "bind a parameter, NAME=INT (repeatable)");
  }
  cmd->add_flag("--json", cfg.json, "structured report");
  if (search) {
    cmd->add_option("--mode", cfg.mode, "vc (vertex cover) or nd (neighborhood diversity)")
        ->check(CLI::IsMember({"vc", "nd"}));
    cmd->add_option("--k-max", cfg.k_max, "largest vertex cover to search for")->check(CLI::PositiveNumber);
    cmd->add_option("--dump-ilp", cfg.dump_ilp, "write every integer program to this file");
    cmd->add_flag("--no-dedup", cfg.no_dedup, "solve an ILP for every prefix assignment");
    cmd->add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--node-budget", cfg.node_budget, "branch-and-bound nodes per ILP")->check(CLI::PositiveNumber);
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"cardMSO model checking, MSO partitioning and balanced partitioning"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* check_cmd = app.add_subcommand("check", "decide whether the graph models a cardMSO sentence");
  add_common(check_cmd, cfg, true, true);

  auto* partition_cmd = app.add_subcommand("partition", "split V into r sets each modelling an MSO sentence");
  add_common(partition_cmd, cfg, true, true);
  partition_cmd->add_option("-r", cfg.r, "number of parts")->required()->check(CLI::PositiveNumber);
  partition_cmd->add_flag("--no-empty-parts", cfg.no_empty_parts, "every part must be nonempty");

  auto* cbalance_cmd = app.add_subcommand("cbalance", "minimum cut over equitable c-partitions");
  add_common(cbalance_cmd, cfg, false, true);
  cbalance_cmd->add_option("-c", cfg.c, "number of parts")->required()->check(CLI::PositiveNumber);
  cbalance_cmd->add_flag("--no-empty-parts", cfg.no_empty_parts, "every part must be nonempty");

  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force reference answers for small graphs");
  oracle_cmd->require_subcommand(1);
  auto* oracle_check = oracle_cmd->add_subcommand("check", "brute-force check");
  add_common(oracle_check, cfg, true, false);
  auto* oracle_partition = oracle_cmd->add_subcommand("partition", "brute-force partition");
  add_common(oracle_partition, cfg, true, false);
  oracle_partition->add_option("-r", cfg.r, "number of parts")->required()->check(CLI::PositiveNumber);
  oracle_partition->add_flag("--no-empty-parts", cfg.no_empty_parts, "every part must be nonempty");
  auto* oracle_cbalance = oracle_cmd->add_subcommand("cbalance", "brute-force balanced partition");
  add_common(oracle_cbalance, cfg, false, false);
  oracle_cbalance->add_option("-c", cfg.c, "number of parts")->required()->check(CLI::PositiveNumber);
  oracle_cbalance->add_flag("--no-empty-parts", cfg.no_empty_parts, "every part must be nonempty");
  for (auto* cmd : {oracle_check, oracle_partition, oracle_cbalance})
    cmd->add_option("--cap", cfg.cap, "refuse graphs with more vertices than this");

  auto* gen_cmd = app.add_subcommand("gen-formula", "print a corpus formula");
  gen_cmd->add_option("name", cfg.corpus_name, "formula name")->required()->check(CLI::IsMember(corpus::names()));
  gen_cmd->add_option("-c", cfg.c, "number of classes for the equitable families")->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kHolds;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*check_cmd) return cmd_check(cfg, out, err);
    if (*partition_cmd) return cmd_partition(cfg, out, err);
    if (*cbalance_cmd) return cmd_cbalance(cfg, out, err);
    if (*oracle_check) return cmd_oracle("check", cfg, out, err);
    if (*oracle_partition) return cmd_oracle("partition", cfg, out, err);
    if (*oracle_cbalance) return cmd_oracle("cbalance", cfg, out, err);
    if (*gen_cmd) {
      out << corpus::text(cfg.corpus_name, cfg.c == 0 ? 3 : cfg.c);
      return kHolds;
    }
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}

}  // namespace cardmso::cli

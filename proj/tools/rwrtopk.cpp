// Command-line front end: precompute an index, answer top-K queries against
// it, cross-check with the iterative solver, and run benchmark sweeps.

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rwr/bench.hpp"
#include "rwr/errors.hpp"
#include "rwr/generators.hpp"
#include "rwr/index.hpp"
#include "rwr/reorder.hpp"
#include "rwr/rwr.hpp"
#include "rwr/search.hpp"

namespace {

constexpr int kExitGeneric = 1;
constexpr int kExitUnknownNode = 2;
constexpr int kExitNoConvergence = 3;

const std::vector<std::string> kOrderNames{"degree", "cluster", "hybrid", "random", "identity"};

struct NotConverged : rwr::Error {
  using rwr::Error::Error;
};

void print_ranked(std::ostream& out, const std::vector<std::pair<std::string, double>>& rows) {
  auto old = out.precision(12);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << (i + 1) << '\t' << rows[i].first << '\t' << rows[i].second << '\n';
  }
  out.precision(old);
}

rwr::Graph load_graph(const std::string& path, const std::string& spec) {
  if (!spec.empty()) return rwr::gen::from_spec(spec);
  return rwr::load_edge_list(std::filesystem::path(path));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact top-K random walk with restart search"};
  app.require_subcommand(1);

  // precompute
  std::string graph_path, out_path, order_name = "hybrid";
  double c = rwr::kDefaultRestart, drop_tol = 0.0;
  std::uint64_t seed = 0;
  auto* precompute = app.add_subcommand("precompute", "Reorder, factor and invert; write an index");
  precompute->add_option("--graph", graph_path, "Edge-list file")->required()->check(CLI::ExistingFile);
  precompute->add_option("--out", out_path, "Index output path")->required();
  precompute->add_option("--c", c, "Restart probability")->capture_default_str();
  precompute->add_option("--order", order_name, "Node ordering")
      ->check(CLI::IsMember(kOrderNames))
      ->capture_default_str();
  precompute->add_option("--drop-tol", drop_tol, "Drop |x| <= tol from inverse factors (0 = exact)")
      ->capture_default_str();
  precompute->add_option("--seed", seed, "Seed for random ordering")->capture_default_str();

  // query
  std::string index_path, node;
  std::size_t k = 5;
  bool no_prune = false;
  auto* query = app.add_subcommand("query", "Top-K proximity search against an index");
  query->add_option("--index", index_path, "Index file")->required()->check(CLI::ExistingFile);
  query->add_option("--node", node, "Query node label")->required();
  query->add_option("--k", k, "Answer count")->capture_default_str();
  query->add_flag("--no-prune", no_prune, "Compute every reachable proximity");

  // oracle
  double tol = rwr::kDefaultOracleTolerance;
  std::size_t max_iter = rwr::kDefaultOracleMaxIter;
  auto* oracle = app.add_subcommand("oracle", "Top-K by plain fixed-point iteration");
  oracle->add_option("--graph", graph_path, "Edge-list file")->required()->check(CLI::ExistingFile);
  oracle->add_option("--node", node, "Query node label")->required();
  oracle->add_option("--k", k, "Answer count")->capture_default_str();
  oracle->add_option("--c", c, "Restart probability")->capture_default_str();
  oracle->add_option("--tol", tol, "Max-norm convergence tolerance")->capture_default_str();
  oracle->add_option("--max-iter", max_iter, "Iteration cap")->capture_default_str();

  // bench
  std::string gen_spec, csv_path, pruning = "both";
  std::vector<std::size_t> ks{5};
  std::vector<std::string> orders{"hybrid", "random"};
  std::vector<std::uint64_t> seeds{1};
  std::size_t queries = 10;
  auto* bench = app.add_subcommand("bench", "Sparsity and pruning sweep, CSV output");
  auto* bench_graph = bench->add_option("--graph", graph_path, "Edge-list file")->check(CLI::ExistingFile);
  auto* bench_gen = bench->add_option("--gen", gen_spec, "Built-in generator, e.g. planted:n=1000,blocks=10");
  bench_graph->excludes(bench_gen);
  bench->add_option("--c", c, "Restart probability")->capture_default_str();
  bench->add_option("--k", ks, "Answer counts")->delimiter(',')->capture_default_str();
  bench->add_option("--order", orders, "Orderings")
      ->delimiter(',')
      ->check(CLI::IsMember(kOrderNames))
      ->capture_default_str();
  bench->add_option("--seed", seeds, "Seeds (query sampling, random ordering)")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--queries", queries, "Queries per seed")->capture_default_str();
  bench->add_option("--pruning", pruning, "Pruning modes to time")
      ->check(CLI::IsMember({"on", "off", "both"}))
      ->capture_default_str();
  bench->add_option("--out", csv_path, "CSV path (default stdout)");

  // partition
  auto* partition = app.add_subcommand("partition", "Print 'node partition' for cluster/hybrid orderings");
  partition->add_option("--graph", graph_path, "Edge-list file")->required()->check(CLI::ExistingFile);
  partition->add_option("--order", order_name, "cluster or hybrid")
      ->check(CLI::IsMember({"cluster", "hybrid"}))
      ->capture_default_str();

  // generate
  auto* generate = app.add_subcommand("generate", "Write a built-in generated graph as an edge list");
  generate->add_option("--gen", gen_spec, "Generator spec")->required();
  generate->add_option("--out", out_path, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitGeneric;
  }

  try {
    if (*precompute) {
      const rwr::Graph g = rwr::load_edge_list(std::filesystem::path(graph_path));
      rwr::PrecomputeSummary summary;
      const auto idx =
          rwr::build_index(g, {c, rwr::parse_ordering_strategy(order_name), drop_tol, seed}, &summary);
      rwr::save_index(std::filesystem::path(out_path), idx);
      std::cout << "order=" << order_name << ' ';
      rwr::print_summary(std::cout, summary);
    } else if (*query) {
      const auto idx = rwr::load_index(std::filesystem::path(index_path));
      const rwr::NodeId q = idx.require(node);
      const auto result = rwr::topk_search(idx, q, k, {!no_prune, nullptr});
      std::vector<std::pair<std::string, double>> rows;
      for (const auto& r : result.ranked) rows.emplace_back(idx.label(r.node), r.proximity);
      print_ranked(std::cout, rows);
      std::cout << "# visited=" << result.stats.nodes_visited
                << " computed=" << result.stats.proximities_computed << " terminated_at_layer=";
      if (result.stats.terminated_at_layer) {
        std::cout << *result.stats.terminated_at_layer;
      } else {
        std::cout << "none";
      }
      std::cout << '\n';
    } else if (*oracle) {
      if (k < 1) throw rwr::ParameterError("K must be at least 1");
      const rwr::Graph g = rwr::load_edge_list(std::filesystem::path(graph_path));
      const auto q = g.find(node);
      if (!q) throw rwr::LookupError("unknown node '" + node + "'");
      const auto a = rwr::column_normalize(g);
      const auto p = rwr::iterative_rwr(a, *q, c, tol, max_iter);
      if (!p.converged) {
        throw NotConverged("no convergence after " + std::to_string(p.iterations) + " iterations");
      }
      std::vector<rwr::NodeId> ids(g.node_count());
      std::iota(ids.begin(), ids.end(), rwr::NodeId{0});
      std::sort(ids.begin(), ids.end(), [&](rwr::NodeId x, rwr::NodeId y) {
        return p.values[x] != p.values[y] ? p.values[x] > p.values[y] : x < y;
      });
      std::vector<std::pair<std::string, double>> rows;
      for (rwr::NodeId u : ids) {
        if (rows.size() == k || p.values[u] <= 0.0) break;
        rows.emplace_back(g.label(u), p.values[u]);
      }
      print_ranked(std::cout, rows);
      std::cout << "# iterations=" << p.iterations << " converged=true\n";
    } else if (*bench) {
      if (graph_path.empty() && gen_spec.empty()) {
        throw rwr::ParameterError("bench needs --graph or --gen");
      }
      const rwr::Graph g = load_graph(graph_path, gen_spec);
      rwr::BenchConfig cfg;
      cfg.c = c;
      cfg.ks = ks;
      cfg.orderings.clear();
      for (const auto& o : orders) cfg.orderings.push_back(rwr::parse_ordering_strategy(o));
      cfg.seeds = seeds;
      cfg.queries_per_seed = queries;
      cfg.pruning = pruning == "on"    ? rwr::PruningMode::kOn
                    : pruning == "off" ? rwr::PruningMode::kOff
                                       : rwr::PruningMode::kBoth;
      const auto rows = rwr::run_bench(g, cfg);
      if (csv_path.empty()) {
        rwr::write_bench_csv(std::cout, rows);
      } else {
        std::ofstream out(csv_path);
        if (!out) throw rwr::Error("cannot open " + csv_path);
        rwr::write_bench_csv(out, rows);
      }
    } else if (*partition) {
      const rwr::Graph g = rwr::load_edge_list(std::filesystem::path(graph_path));
      const auto r = order_name == "cluster" ? rwr::cluster_reorder(g) : rwr::hybrid_reorder(g);
      rwr::write_partitioning(std::cout, g, r.partitioning);
    } else if (*generate) {
      const rwr::Graph g = rwr::gen::from_spec(gen_spec);
      if (out_path.empty()) {
        rwr::write_edge_list(std::cout, g);
      } else {
        std::ofstream out(out_path);
        if (!out) throw rwr::Error("cannot open " + out_path);
        rwr::write_edge_list(out, g);
      }
    }
  } catch (const rwr::LookupError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUnknownNode;
  } catch (const NotConverged& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNoConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitGeneric;
  }
  return 0;
}

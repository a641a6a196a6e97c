#include "rwr/bench.hpp"

#include <chrono>
#include <ostream>
#include <random>

#include "rwr/errors.hpp"
#include "rwr/index.hpp"
#include "rwr/search.hpp"

namespace rwr {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

}  // namespace

std::vector<BenchRow> run_bench(const Graph& g, const BenchConfig& cfg) {
  if (g.node_count() == 0) throw ParameterError("cannot benchmark an empty graph");
  if (cfg.ks.empty() || cfg.orderings.empty() || cfg.seeds.empty()) {
    throw ParameterError("bench needs at least one K, ordering and seed");
  }
  const bool run_on = cfg.pruning != PruningMode::kOff;
  const bool run_off = cfg.pruning != PruningMode::kOn;

  std::vector<BenchRow> rows;
  for (OrderingStrategy ordering : cfg.orderings) {
    for (std::uint64_t seed : cfg.seeds) {
      PrecomputeSummary summary;
      const ProximityIndex idx = build_index(g, {cfg.c, ordering, 0.0, seed}, &summary);

      std::mt19937_64 rng(seed);
      std::uniform_int_distribution<NodeId> pick(0, g.node_count() - 1);
      std::vector<NodeId> queries(cfg.queries_per_seed);
      for (auto& q : queries) q = pick(rng);

      for (std::size_t k : cfg.ks) {
        BenchRow row;
        row.ordering = ordering;
        row.seed = seed;
        row.k = k;
        row.n = summary.n;
        row.m = summary.m;
        row.kappa = summary.kappa.value_or(0);
        row.nnz_lower_inverse = summary.nnz_lower_inverse;
        row.nnz_upper_inverse = summary.nnz_upper_inverse;
        row.nnz_ratio = summary.nnz_ratio();
        row.precompute_ms = summary.seconds * 1e3;
        row.queries = queries.size();

        double on_ms = 0, off_ms = 0, on_computed = 0, off_computed = 0;
        for (NodeId q : queries) {
          QueryResult pruned, unpruned;
          if (run_on) {
            auto t = Clock::now();
            pruned = topk_search(idx, q, k, {true, nullptr});
            on_ms += elapsed_ms(t);
            on_computed += static_cast<double>(pruned.stats.proximities_computed);
          }
          if (run_off) {
            auto t = Clock::now();
            unpruned = topk_search(idx, q, k, {false, nullptr});
            off_ms += elapsed_ms(t);
            off_computed += static_cast<double>(unpruned.stats.proximities_computed);
          }
          if (run_on && run_off) {
            if (pruned.stats.proximities_computed < unpruned.stats.proximities_computed) {
              ++row.fewer_computations;
            }
            if (pruned.ranked == unpruned.ranked) ++row.identical_results;
          }
        }
        const double count = queries.empty() ? 1.0 : static_cast<double>(queries.size());
        if (run_on) {
          row.query_ms = on_ms / count;
          row.computed = on_computed / count;
        }
        if (run_off) {
          row.query_ms_unpruned = off_ms / count;
          row.computed_unpruned = off_computed / count;
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "ordering,seed,k,n,m,kappa,nnz_linv,nnz_uinv,nnz_ratio,precompute_ms,queries,"
         "mean_query_ms,mean_computed,mean_query_ms_noprune,mean_computed_noprune,"
         "pruning_speedup,fewer_computations,identical_results\n";
  auto opt = [&](double v) -> std::ostream& {
    if (v >= 0) out << v;
    return out;
  };
  for (const BenchRow& r : rows) {
    out << to_string(r.ordering) << ',' << r.seed << ',' << r.k << ',' << r.n << ',' << r.m << ','
        << r.kappa << ',' << r.nnz_lower_inverse << ',' << r.nnz_upper_inverse << ','
        << r.nnz_ratio << ',' << r.precompute_ms << ',' << r.queries << ',';
    opt(r.query_ms) << ',';
    opt(r.computed) << ',';
    opt(r.query_ms_unpruned) << ',';
    opt(r.computed_unpruned) << ',';
    opt(r.pruning_speedup()) << ',';
    out << r.fewer_computations << ',' << r.identical_results << '\n';
  }
}

}  // namespace rwr

#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "rwr/graph.hpp"
#include "rwr/reorder.hpp"

namespace rwr {

enum class PruningMode { kOn, kOff, kBoth };

struct BenchConfig {
  double c = 0.95;
  std::vector<std::size_t> ks{5};
  std::vector<OrderingStrategy> orderings{OrderingStrategy::kHybrid, OrderingStrategy::kRandom};
  std::vector<std::uint64_t> seeds{1};
  std::size_t queries_per_seed = 10;
  PruningMode pruning = PruningMode::kBoth;
};

/// Aggregates for one (ordering, seed, K) configuration.
struct BenchRow {
  OrderingStrategy ordering;
  std::uint64_t seed = 0;
  std::size_t k = 0;
  NodeId n = 0;
  std::uint64_t m = 0;
  std::uint32_t kappa = 0;
  std::size_t nnz_lower_inverse = 0;
  std::size_t nnz_upper_inverse = 0;
  double nnz_ratio = 0.0;
  double precompute_ms = 0.0;
  std::size_t queries = 0;
  // Means over queries; negative when the mode was not run.
  double query_ms = -1.0;
  double computed = -1.0;
  double query_ms_unpruned = -1.0;
  double computed_unpruned = -1.0;
  /// Queries where pruning computed strictly fewer proximities.
  std::size_t fewer_computations = 0;
  /// Queries where pruned and unpruned runs ranked identically.
  std::size_t identical_results = 0;

  double pruning_speedup() const {
    return (query_ms > 0 && query_ms_unpruned >= 0) ? query_ms_unpruned / query_ms : -1.0;
  }
};

/// Queries are drawn uniformly per seed; the seed also drives random ordering.
std::vector<BenchRow> run_bench(const Graph& g, const BenchConfig& cfg);

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace rwr

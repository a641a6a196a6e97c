#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rwr/graph.hpp"
#include "rwr/index.hpp"

namespace rwr {

inline constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

/// Breadth-first layers from the query, following probability flow
/// (v -> u whenever A[u][v] != 0).
struct BfsTree {
  NodeId root = 0;
  std::vector<std::uint32_t> layer;  // kUnreached for nodes with no path from root
  std::vector<NodeId> visit_order;   // ascending (layer, id)
};

BfsTree build_bfs(const NormalizedMatrix& a, NodeId q);

/// c' = (1 - c) / (1 - A_uu + c A_uu).
double restart_factor(double c, double self_loop);

struct Estimate {
  double bound = 0.0;    // c' * bracket, or 1 for the query node
  double bracket = 0.0;  // sum of the three terms
};

/**
 * Running terms of the upper bound. After estimating node u the state holds
 * u's three terms; `select()` folds u's exact proximity in before the next
 * estimate. A node that is never selected folds in as proximity 0.
 */
struct EstimatorState {
  double term1 = 0.0;
  double term2 = 0.0;
  double term3 = 0.0;
  double selected_mass = 0.0;
  std::optional<NodeId> last_node;
  std::uint32_t last_layer = 0;
  double last_proximity = 0.0;
  double last_col_max = 0.0;
};

/// State for the query node itself: no selected nodes, term3 = A_max.
EstimatorState root_estimator(NodeId q, double global_max);

/// Record the exact proximity of the node just estimated.
void select(EstimatorState& st, double proximity, double col_max);

struct EstimateContext {
  std::uint32_t layer = 0;
  double restart_factor = 0.0;  // c' of the node being estimated
  double global_max = 0.0;
};

/**
 * O(1) update of the three terms from the previously visited node to `u`.
 * Throws ContractError unless `u` follows the previous node in
 * (layer, id) order with no layer skipped.
 */
std::pair<Estimate, EstimatorState> estimate_incremental(const EstimatorState& prev, NodeId u,
                                                         const EstimateContext& ctx);

struct SelectedNode {
  NodeId node;
  std::uint32_t layer;
  double proximity;
};

/**
 * Upper bound recomputed from scratch over the selected set. `selected` lists
 * every node whose exact proximity is known, in visit order, all preceding u.
 */
Estimate estimate_direct(std::span<const SelectedNode> selected, const NormalizedMatrix& a,
                         double c, NodeId q, NodeId u, std::uint32_t layer_u);

/// K best (proximity, node) pairs seen so far. Missing slots act as
/// zero-proximity placeholders, so theta stays 0 until K nodes are admitted.
class CandidateSet {
 public:
  explicit CandidateSet(std::size_t k);

  double theta() const noexcept;
  /// Admits when proximity > theta; evicts the weakest, later-visited first.
  bool offer(double proximity, NodeId node);
  std::size_t size() const noexcept { return heap_.size(); }

  /// Descending proximity, ties by ascending node id.
  std::vector<std::pair<NodeId, double>> ranked() const;

 private:
  struct Entry {
    double proximity;
    NodeId node;
    std::uint64_t visit;
  };
  static bool better(const Entry& a, const Entry& b);

  std::size_t k_;
  std::uint64_t visits_ = 0;
  std::vector<Entry> heap_;
};

struct SearchStats {
  std::size_t nodes_visited = 0;
  std::size_t proximities_computed = 0;
  std::size_t reachable = 0;
  std::optional<std::uint32_t> terminated_at_layer;
};

struct RankedNode {
  NodeId node;
  double proximity;

  friend bool operator==(const RankedNode&, const RankedNode&) = default;
};

struct QueryResult {
  std::vector<RankedNode> ranked;
  SearchStats stats;
};

/// One row per visited node; filled only when tracing is requested.
struct VisitRecord {
  NodeId node;
  std::uint32_t layer;
  Estimate estimate;
  double restart_factor;
  double theta_before;
  bool computed;
  double proximity;  // NaN when not computed
};

struct SearchOptions {
  bool pruning = true;
  std::vector<VisitRecord>* trace = nullptr;
};

/**
 * Exact top-K by proximity. Nodes are visited in BFS (layer, id) order;
 * a node whose bound is below theta cannot enter the answer and is skipped,
 * and the search stops once max_u c'_u times the bracket falls below theta
 * (with no self-loops this is the node's own bound). Unreachable nodes have
 * proximity 0 and are never reported.
 */
QueryResult topk_search(const ProximityIndex& idx, NodeId q, std::size_t k,
                        const SearchOptions& opts = {});

}  // namespace rwr

#include "rwr/search.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rwr/errors.hpp"
#include "rwr/rwr.hpp"

namespace rwr {

BfsTree build_bfs(const NormalizedMatrix& a, NodeId q) {
  const NodeId n = a.size();
  if (q >= n) throw LookupError("query node " + std::to_string(q) + " out of range");
  BfsTree tree;
  tree.root = q;
  tree.layer.assign(n, kUnreached);
  tree.layer[q] = 0;
  tree.visit_order.push_back(q);
  // visit_order doubles as the BFS queue; each layer is sorted by id once
  // it is complete, before it is expanded.
  std::size_t layer_begin = 0;
  while (layer_begin < tree.visit_order.size()) {
    const std::size_t layer_end = tree.visit_order.size();
    std::sort(tree.visit_order.begin() + static_cast<std::ptrdiff_t>(layer_begin),
              tree.visit_order.end());
    for (std::size_t k = layer_begin; k < layer_end; ++k) {
      const NodeId v = tree.visit_order[k];
      const std::uint32_t next = tree.layer[v] + 1;
      for (NodeId u : a.columns.indices(v)) {
        if (tree.layer[u] == kUnreached) {
          tree.layer[u] = next;
          tree.visit_order.push_back(u);
        }
      }
    }
    layer_begin = layer_end;
  }
  return tree;
}

double restart_factor(double c, double self_loop) {
  return (1.0 - c) / (1.0 - self_loop + c * self_loop);
}

EstimatorState root_estimator(NodeId q, double global_max) {
  EstimatorState st;
  st.term3 = global_max;
  st.last_node = q;
  st.last_layer = 0;
  return st;
}

void select(EstimatorState& st, double proximity, double col_max) {
  st.last_proximity = proximity;
  st.last_col_max = col_max;
}

std::pair<Estimate, EstimatorState> estimate_incremental(const EstimatorState& prev, NodeId u,
                                                         const EstimateContext& ctx) {
  if (!prev.last_node) throw ContractError("estimator has no previous node");
  const bool same_layer = ctx.layer == prev.last_layer;
  if (!(same_layer && u > *prev.last_node) && ctx.layer != prev.last_layer + 1) {
    throw ContractError("node " + std::to_string(u) + " (layer " + std::to_string(ctx.layer) +
                        ") does not follow node " + std::to_string(*prev.last_node) +
                        " (layer " + std::to_string(prev.last_layer) + ") in visit order");
  }

  const double contribution = prev.last_proximity * prev.last_col_max;
  EstimatorState next;
  if (same_layer) {
    next.term1 = prev.term1;
    next.term2 = prev.term2 + contribution;
  } else {
    next.term1 = prev.term2 + contribution;
    next.term2 = 0.0;
  }
  next.selected_mass = prev.selected_mass + prev.last_proximity;
  next.term3 = (1.0 - next.selected_mass) * ctx.global_max;
  next.last_node = u;
  next.last_layer = ctx.layer;

  Estimate e;
  e.bracket = next.term1 + next.term2 + next.term3;
  e.bound = ctx.restart_factor * e.bracket;
  return {e, next};
}

Estimate estimate_direct(std::span<const SelectedNode> selected, const NormalizedMatrix& a,
                         double c, NodeId q, NodeId u, std::uint32_t layer_u) {
  if (u == q) return {1.0, 1.0};
  double previous_layer = 0.0;
  double same_layer = 0.0;
  double mass = 0.0;
  for (const SelectedNode& s : selected) {
    if (s.node == u) throw ContractError("node appears in its own selected set");
    mass += s.proximity;
    if (s.layer + 1 == layer_u) {
      previous_layer += s.proximity * a.col_max[s.node];
    } else if (s.layer == layer_u) {
      same_layer += s.proximity * a.col_max[s.node];
    }
  }
  Estimate e;
  e.bracket = previous_layer + same_layer + (1.0 - mass) * a.global_max;
  e.bound = restart_factor(c, a.self_loop(u)) * e.bracket;
  return e;
}

CandidateSet::CandidateSet(std::size_t k) : k_(k) {
  if (k < 1) throw ParameterError("K must be at least 1");
  heap_.reserve(std::min<std::size_t>(k, 1u << 16));
}

bool CandidateSet::better(const Entry& a, const Entry& b) {
  if (a.proximity != b.proximity) return a.proximity > b.proximity;
  return a.visit < b.visit;
}

double CandidateSet::theta() const noexcept {
  return heap_.size() < k_ ? 0.0 : heap_.front().proximity;
}

bool CandidateSet::offer(double proximity, NodeId node) {
  const std::uint64_t visit = visits_++;
  if (!(proximity > theta())) return false;
  // Heap front is the weakest entry.
  if (heap_.size() == k_) {
    std::pop_heap(heap_.begin(), heap_.end(), better);
    heap_.pop_back();
  }
  heap_.push_back({proximity, node, visit});
  std::push_heap(heap_.begin(), heap_.end(), better);
  return true;
}

std::vector<std::pair<NodeId, double>> CandidateSet::ranked() const {
  std::vector<std::pair<NodeId, double>> out;
  out.reserve(heap_.size());
  for (const Entry& e : heap_) out.emplace_back(e.node, e.proximity);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  return out;
}

QueryResult topk_search(const ProximityIndex& idx, NodeId q, std::size_t k,
                        const SearchOptions& opts) {
  if (k < 1) throw ParameterError("K must be at least 1");
  const NormalizedMatrix& a = idx.matrix();
  const double c = idx.restart();
  const BfsTree tree = build_bfs(a, q);
  const QueryWorkspace ws = prepare_query(idx, q);

  QueryResult result;
  result.stats.reachable = tree.visit_order.size();
  CandidateSet candidates(k);
  EstimatorState state = root_estimator(q, a.global_max);

  for (NodeId u : tree.visit_order) {
    const std::uint32_t layer = tree.layer[u];
    const double cprime = restart_factor(c, idx.self_loop(u));
    Estimate estimate{1.0, 1.0};
    if (u != q) {
      auto [e, next] = estimate_incremental(state, u, {layer, cprime, a.global_max});
      estimate = e;
      state = next;
    }
    ++result.stats.nodes_visited;
    const double theta = candidates.theta();

    VisitRecord record{u, layer, estimate, cprime, theta, false, std::nan("")};
    bool compute = true;
    if (opts.pruning && estimate.bound < theta) {
      // u cannot beat theta. Later nodes are bounded by max c' times a
      // bracket no larger than this one.
      if (u != q && idx.max_restart_factor() * estimate.bracket < theta) {
        result.stats.terminated_at_layer = layer;
        if (opts.trace) opts.trace->push_back(record);
        break;
      }
      compute = false;
    }
    if (compute) {
      const double p = proximity_of(idx, ws, u);
      ++result.stats.proximities_computed;
      candidates.offer(p, u);
      select(state, p, a.col_max[u]);
      record.computed = true;
      record.proximity = p;
    }
    if (opts.trace) opts.trace->push_back(record);
  }

  for (const auto& [node, p] : candidates.ranked()) result.ranked.push_back({node, p});
  return result;
}

}  // namespace rwr

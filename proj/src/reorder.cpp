#include "rwr/reorder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

#include "rwr/errors.hpp"

namespace rwr {

namespace {

// Symmetric weighted graph used by one Louvain level. Off-diagonal entries
// live in CSR form; `loop[i]` is the diagonal entry A_ii.
struct LevelGraph {
  std::uint32_t n = 0;
  std::vector<std::uint64_t> ptr{0};
  std::vector<std::uint32_t> nbr;
  std::vector<double> w;
  std::vector<double> loop;
  std::vector<double> degree;
  double two_m = 0.0;
};

LevelGraph symmetrize(const Graph& g) {
  const NodeId n = g.node_count();
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj(n);
  LevelGraph lg;
  lg.n = n;
  lg.loop.assign(n, 0.0);
  for (const Edge& e : g.edges()) {
    if (e.src == e.dst) {
      lg.loop[e.src] += 2.0 * e.weight;
    } else {
      adj[e.src].emplace_back(e.dst, e.weight);
      adj[e.dst].emplace_back(e.src, e.weight);
    }
  }
  lg.ptr.assign(std::size_t{n} + 1, 0);
  for (NodeId i = 0; i < n; ++i) {
    auto& row = adj[i];
    std::sort(row.begin(), row.end());
    for (const auto& [j, wt] : row) {
      if (!lg.nbr.empty() && lg.ptr[i] < lg.nbr.size() && lg.nbr.back() == j) {
        lg.w.back() += wt;
      } else {
        lg.nbr.push_back(j);
        lg.w.push_back(wt);
      }
    }
    lg.ptr[i + 1] = lg.nbr.size();
  }
  lg.degree.assign(n, 0.0);
  for (NodeId i = 0; i < n; ++i) {
    double k = lg.loop[i];
    for (auto e = lg.ptr[i]; e < lg.ptr[i + 1]; ++e) k += lg.w[e];
    lg.degree[i] = k;
    lg.two_m += k;
  }
  return lg;
}

double level_modularity(const LevelGraph& lg, const std::vector<std::uint32_t>& comm) {
  if (lg.two_m <= 0.0) return 0.0;
  const auto ncomm = *std::max_element(comm.begin(), comm.end()) + 1;
  std::vector<double> inside(ncomm, 0.0), total(ncomm, 0.0);
  for (std::uint32_t i = 0; i < lg.n; ++i) {
    inside[comm[i]] += lg.loop[i];
    total[comm[i]] += lg.degree[i];
    for (auto e = lg.ptr[i]; e < lg.ptr[i + 1]; ++e) {
      if (comm[lg.nbr[e]] == comm[i]) inside[comm[i]] += lg.w[e];
    }
  }
  double q = 0.0;
  for (std::uint32_t c = 0; c < ncomm; ++c) {
    q += inside[c] / lg.two_m - (total[c] / lg.two_m) * (total[c] / lg.two_m);
  }
  return q;
}

// Local moving phase. Returns true when at least one node changed community.
bool move_nodes(const LevelGraph& lg, std::vector<std::uint32_t>& comm) {
  std::vector<double> total(lg.n, 0.0);
  for (std::uint32_t i = 0; i < lg.n; ++i) total[comm[i]] += lg.degree[i];

  std::vector<double> link(lg.n, 0.0);
  std::vector<std::uint32_t> touched;
  bool any_move = false;
  bool moved = true;
  while (moved) {
    moved = false;
    for (std::uint32_t i = 0; i < lg.n; ++i) {
      const double ki = lg.degree[i];
      if (ki <= 0.0) continue;
      const std::uint32_t own = comm[i];

      touched.clear();
      for (auto e = lg.ptr[i]; e < lg.ptr[i + 1]; ++e) {
        std::uint32_t c = comm[lg.nbr[e]];
        if (link[c] == 0.0) touched.push_back(c);
        link[c] += lg.w[e];
      }

      total[own] -= ki;
      const double scale = ki / lg.two_m;
      std::uint32_t best = own;
      double best_gain = link[own] - total[own] * scale;
      for (std::uint32_t c : touched) {
        double gain = link[c] - total[c] * scale;
        if (gain > best_gain + 1e-12 * (std::abs(best_gain) + ki)) {
          best = c;
          best_gain = gain;
        }
      }
      total[best] += ki;
      comm[i] = best;
      if (best != own) moved = any_move = true;

      for (std::uint32_t c : touched) link[c] = 0.0;
      link[own] = 0.0;
    }
  }
  return any_move;
}

// Relabel communities 0..k-1 in order of their smallest member.
std::uint32_t compact(std::vector<std::uint32_t>& comm) {
  std::vector<std::uint32_t> remap(comm.size(), UINT32_MAX);
  std::uint32_t next = 0;
  for (auto& c : comm) {
    if (remap[c] == UINT32_MAX) remap[c] = next++;
    c = remap[c];
  }
  return next;
}

LevelGraph aggregate(const LevelGraph& lg, const std::vector<std::uint32_t>& comm,
                     std::uint32_t ncomm) {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj(ncomm);
  LevelGraph out;
  out.n = ncomm;
  out.loop.assign(ncomm, 0.0);
  out.degree.assign(ncomm, 0.0);
  for (std::uint32_t i = 0; i < lg.n; ++i) {
    const auto ci = comm[i];
    out.loop[ci] += lg.loop[i];
    out.degree[ci] += lg.degree[i];
    for (auto e = lg.ptr[i]; e < lg.ptr[i + 1]; ++e) {
      const auto cj = comm[lg.nbr[e]];
      if (cj == ci) {
        out.loop[ci] += lg.w[e];
      } else {
        adj[ci].emplace_back(cj, lg.w[e]);
      }
    }
  }
  out.ptr.assign(std::size_t{ncomm} + 1, 0);
  for (std::uint32_t c = 0; c < ncomm; ++c) {
    auto& row = adj[c];
    std::sort(row.begin(), row.end());
    std::uint64_t start = out.nbr.size();
    for (const auto& [d, wt] : row) {
      if (out.nbr.size() > start && out.nbr.back() == d) {
        out.w.back() += wt;
      } else {
        out.nbr.push_back(d);
        out.w.push_back(wt);
      }
    }
    out.ptr[c + 1] = out.nbr.size();
  }
  out.two_m = lg.two_m;
  return out;
}

std::vector<NodeId> nodes_by_partition(const Partitioning& p) {
  std::vector<NodeId> order(p.assign.size());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return p.assign[a] < p.assign[b]; });
  return order;
}

}  // namespace

std::size_t Partitioning::border_size() const {
  return static_cast<std::size_t>(std::count(assign.begin(), assign.end(), border()));
}

void write_partitioning(std::ostream& out, const Graph& g, const Partitioning& p) {
  for (NodeId u = 0; u < g.node_count(); ++u) out << g.label(u) << ' ' << p.assign[u] << '\n';
}

double modularity(const Graph& g, const std::vector<std::uint32_t>& assign) {
  if (assign.size() != g.node_count()) throw ValidationError("assignment size mismatch");
  if (assign.empty()) return 0.0;
  auto comm = assign;
  compact(comm);
  return level_modularity(symmetrize(g), comm);
}

LouvainResult louvain(const Graph& g) {
  const NodeId n = g.node_count();
  LouvainResult result;
  if (n == 0) return result;

  LevelGraph level = symmetrize(g);
  // membership[u] = community of original node u at the current level.
  std::vector<std::uint32_t> membership(n);
  std::iota(membership.begin(), membership.end(), 0u);

  std::vector<std::uint32_t> comm(n);
  std::iota(comm.begin(), comm.end(), 0u);
  result.level_modularity.push_back(level_modularity(level, comm));

  while (level.two_m > 0.0) {
    comm.resize(level.n);
    std::iota(comm.begin(), comm.end(), 0u);
    if (!move_nodes(level, comm)) break;
    const auto ncomm = compact(comm);
    result.level_modularity.push_back(level_modularity(level, comm));
    for (auto& m : membership) m = comm[m];
    if (ncomm == level.n) break;
    level = aggregate(level, comm, ncomm);
  }

  // Number final communities 1..kappa by smallest original member.
  auto kappa = compact(membership);
  for (auto& m : membership) ++m;
  result.partitioning.kappa = kappa;
  result.partitioning.assign = std::move(membership);
  return result;
}

Partitioning louvain_partition(const Graph& g) { return louvain(g).partitioning; }

Ordering degree_reorder(const Graph& g) {
  auto deg = g.degrees();
  std::vector<NodeId> order(g.node_count());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return deg[a] < deg[b]; });
  return Ordering::from_order(std::move(order));
}

ClusteredOrdering cluster_reorder(const Graph& g) {
  Partitioning p = louvain_partition(g);
  // Border membership is judged against the Louvain assignment, not the
  // partially rewritten one.
  const auto original = p.assign;
  for (const Edge& e : g.edges()) {
    if (original[e.src] != original[e.dst]) {
      p.assign[e.src] = p.border();
      p.assign[e.dst] = p.border();
    }
  }
  auto order = nodes_by_partition(p);
  return {Ordering::from_order(std::move(order)), std::move(p)};
}

ClusteredOrdering hybrid_reorder(const Graph& g) {
  ClusteredOrdering clustered = cluster_reorder(g);
  const auto& assign = clustered.partitioning.assign;
  auto deg = g.degrees();
  std::vector<NodeId> order(g.node_count());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    if (assign[a] != assign[b]) return assign[a] < assign[b];
    return deg[a] < deg[b];
  });
  clustered.ordering = Ordering::from_order(std::move(order));
  return clustered;
}

Ordering random_reorder(NodeId n, std::uint64_t seed) {
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return Ordering::from_order(std::move(order));
}

std::string_view to_string(OrderingStrategy s) {
  switch (s) {
    case OrderingStrategy::kDegree: return "degree";
    case OrderingStrategy::kCluster: return "cluster";
    case OrderingStrategy::kHybrid: return "hybrid";
    case OrderingStrategy::kRandom: return "random";
    case OrderingStrategy::kIdentity: return "identity";
  }
  return "unknown";
}

OrderingStrategy parse_ordering_strategy(std::string_view name) {
  for (auto s : {OrderingStrategy::kDegree, OrderingStrategy::kCluster, OrderingStrategy::kHybrid,
                 OrderingStrategy::kRandom, OrderingStrategy::kIdentity}) {
    if (to_string(s) == name) return s;
  }
  throw ParameterError("unknown ordering strategy '" + std::string(name) + "'");
}

OrderingResult make_ordering(const Graph& g, OrderingStrategy strategy, std::uint64_t seed) {
  switch (strategy) {
    case OrderingStrategy::kDegree: return {degree_reorder(g), std::nullopt};
    case OrderingStrategy::kCluster: {
      auto r = cluster_reorder(g);
      return {std::move(r.ordering), std::move(r.partitioning)};
    }
    case OrderingStrategy::kHybrid: {
      auto r = hybrid_reorder(g);
      return {std::move(r.ordering), std::move(r.partitioning)};
    }
    case OrderingStrategy::kRandom: return {random_reorder(g.node_count(), seed), std::nullopt};
    case OrderingStrategy::kIdentity: return {Ordering::identity(g.node_count()), std::nullopt};
  }
  throw ParameterError("unknown ordering strategy");
}

}  // namespace rwr

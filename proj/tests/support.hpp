#pragma once

// Test-only oracles. Everything here is dense and brute force, deliberately
// independent of the sparse code paths under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "rwr/graph.hpp"
#include "rwr/lu.hpp"
#include "rwr/search.hpp"

namespace rwr::testing {

using Dense = std::vector<std::vector<double>>;

inline Dense zeros(std::size_t n) { return Dense(n, std::vector<double>(n, 0.0)); }

inline Dense identity(std::size_t n) {
  Dense d = zeros(n);
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 1.0;
  return d;
}

/// Column-major storage to dense (row, col).
inline Dense dense_from_columns(const CompressedMatrix& m) {
  Dense d = zeros(m.n);
  for (NodeId j = 0; j < m.n; ++j) {
    auto rows = m.indices(j);
    auto vals = m.values(j);
    for (std::size_t k = 0; k < rows.size(); ++k) d[rows[k]][j] = vals[k];
  }
  return d;
}

/// Row-major storage to dense (row, col).
inline Dense dense_from_rows(const CompressedMatrix& m) {
  Dense d = zeros(m.n);
  for (NodeId i = 0; i < m.n; ++i) {
    auto cols = m.indices(i);
    auto vals = m.values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) d[i][cols[k]] = vals[k];
  }
  return d;
}

inline Dense dense(const TriangularFactor& f) {
  Dense d = dense_from_columns(f.columns);
  if (f.unit_diagonal) {
    for (std::size_t i = 0; i < d.size(); ++i) d[i][i] = 1.0;
  }
  return d;
}

inline Dense dense(const InverseFactor& f) {
  return f.kind == TriangleKind::kLower ? dense_from_columns(f.storage)
                                        : dense_from_rows(f.storage);
}

inline Dense multiply(const Dense& a, const Dense& b) {
  const std::size_t n = a.size();
  Dense c = zeros(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (a[i][k] == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  }
  return c;
}

inline double max_abs_diff(const Dense& a, const Dense& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[i][j] - b[i][j]));
  }
  return worst;
}

/// Dense transition matrix straight from the edge list.
inline Dense dense_transition(const Graph& g) {
  const NodeId n = g.node_count();
  Dense a = zeros(n);
  std::vector<double> out(n, 0.0);
  for (const Edge& e : g.edges()) out[e.src] += e.weight;
  for (const Edge& e : g.edges()) a[e.dst][e.src] += e.weight / out[e.src];
  return a;
}

/// Solve (I - (1-c) A) p = c e_q by dense Gaussian elimination with partial
/// pivoting: a third route to proximities, independent of both the
/// iterative oracle and the sparse factors.
inline std::vector<double> dense_rwr(const Graph& g, NodeId q, double c) {
  const NodeId n = g.node_count();
  Dense a = dense_transition(g);
  Dense w = identity(n);
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) w[i][j] -= (1.0 - c) * a[i][j];
  }
  std::vector<double> b(n, 0.0);
  b[q] = c;
  for (NodeId col = 0; col < n; ++col) {
    NodeId piv = col;
    for (NodeId r = col + 1; r < n; ++r) {
      if (std::abs(w[r][col]) > std::abs(w[piv][col])) piv = r;
    }
    std::swap(w[piv], w[col]);
    std::swap(b[piv], b[col]);
    for (NodeId r = col + 1; r < n; ++r) {
      const double f = w[r][col] / w[col][col];
      if (f == 0.0) continue;
      for (NodeId k = col; k < n; ++k) w[r][k] -= f * w[col][k];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (NodeId i = n; i-- > 0;) {
    double s = b[i];
    for (NodeId k = i + 1; k < n; ++k) s -= w[i][k] * x[k];
    x[i] = s / w[i][i];
  }
  return x;
}

/// Modularity by the O(n^2) definition on the symmetrized graph:
/// Q = 1/2m * sum_ij [A_ij - k_i k_j / 2m] delta(c_i, c_j).
inline double brute_force_modularity(const Graph& g, const std::vector<std::uint32_t>& comm) {
  const NodeId n = g.node_count();
  Dense sym = zeros(n);
  for (const Edge& e : g.edges()) {
    if (e.src == e.dst) {
      sym[e.src][e.src] += 2.0 * e.weight;
    } else {
      sym[e.src][e.dst] += e.weight;
      sym[e.dst][e.src] += e.weight;
    }
  }
  std::vector<double> k(n, 0.0);
  double two_m = 0.0;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) k[i] += sym[i][j];
    two_m += k[i];
  }
  if (two_m == 0.0) return 0.0;
  double q = 0.0;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      if (comm[i] == comm[j]) q += sym[i][j] - k[i] * k[j] / two_m;
    }
  }
  return q / two_m;
}

/// Random digraph used across the property suites.
inline Graph random_graph(NodeId n, std::uint64_t m, bool weighted, bool loops, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<NodeId> pick(0, n - 1);
  std::uniform_real_distribution<double> weight(0.1, 3.0);
  std::set<std::pair<NodeId, NodeId>> seen;
  std::vector<Edge> edges;
  while (edges.size() < m) {
    NodeId u = pick(rng), v = pick(rng);
    if (u == v && !loops) continue;
    if (!seen.emplace(u, v).second) continue;
    edges.push_back({u, v, weighted ? weight(rng) : 1.0});
  }
  return Graph::from_edges(n, std::move(edges));
}

/// Compare a search answer with a full reference vector. Node sets must
/// match except for nodes whose reference value lies within `tol` of the
/// K-th value, where either choice is a correct top-K.
inline bool matches_reference(const std::vector<RankedNode>& got, const std::vector<double>& ref,
                              std::size_t k, double tol) {
  std::vector<double> sorted;
  for (double x : ref) {
    if (x > 0.0) sorted.push_back(x);
  }
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const std::size_t want = std::min(k, sorted.size());
  if (got.size() != want) return false;
  if (want == 0) return true;
  const double kth = sorted[want - 1];
  std::vector<bool> in(ref.size(), false);
  for (std::size_t i = 0; i < got.size(); ++i) {
    const auto& r = got[i];
    if (r.node >= ref.size() || in[r.node]) return false;
    in[r.node] = true;
    if (std::abs(r.proximity - ref[r.node]) > tol) return false;
    if (ref[r.node] < kth - tol) return false;
    if (i > 0 && got[i - 1].proximity < r.proximity) return false;
  }
  for (std::size_t u = 0; u < ref.size(); ++u) {
    if (!in[u] && ref[u] > kth + tol) return false;
  }
  return true;
}

}  // namespace rwr::testing

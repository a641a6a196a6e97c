#include "rwr/rwr.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rwr/errors.hpp"

namespace rwr {

namespace {

void check_node(NodeId u, NodeId n) {
  if (u >= n) {
    throw LookupError("node id " + std::to_string(u) + " out of range [0, " + std::to_string(n) +
                      ")");
  }
}

}  // namespace

ProximityVector iterative_rwr(const NormalizedMatrix& a, NodeId q, double c, double tol,
                              std::size_t max_iter) {
  const NodeId n = a.size();
  check_node(q, n);
  if (!(c > 0.0 && c < 1.0)) throw ParameterError("restart probability must lie in (0, 1)");
  if (!(tol > 0.0)) throw ParameterError("tolerance must be positive");

  ProximityVector out;
  out.query = q;
  out.values.assign(n, 0.0);
  out.values[q] = 1.0;
  std::vector<double> next(n);
  const double damp = 1.0 - c;
  while (out.iterations < max_iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (NodeId v = 0; v < n; ++v) {
      const double pv = out.values[v];
      if (pv == 0.0) continue;
      auto rows = a.columns.indices(v);
      auto vals = a.columns.values(v);
      for (std::size_t k = 0; k < rows.size(); ++k) next[rows[k]] += damp * vals[k] * pv;
    }
    next[q] += c;
    double change = 0.0;
    for (NodeId u = 0; u < n; ++u) change = std::max(change, std::abs(next[u] - out.values[u]));
    out.values.swap(next);
    ++out.iterations;
    if (change <= tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

QueryWorkspace prepare_query(const ProximityIndex& idx, NodeId q) {
  const NodeId n = idx.node_count();
  check_node(q, n);
  QueryWorkspace ws;
  ws.query = q;
  ws.y.assign(n, 0.0);
  const auto& linv = idx.lower_inverse().storage;
  const NodeId col = idx.ordering().position(q);
  auto rows = linv.indices(col);
  auto vals = linv.values(col);
  const double c = idx.restart();
  for (std::size_t k = 0; k < rows.size(); ++k) ws.y[rows[k]] = c * vals[k];
  return ws;
}

double proximity_of(const ProximityIndex& idx, const QueryWorkspace& ws, NodeId u) {
  check_node(u, idx.node_count());
  if (ws.y.size() != idx.node_count()) throw ContractError("workspace not prepared for this index");
  const auto& uinv = idx.upper_inverse().storage;
  const NodeId row = idx.ordering().position(u);
  auto cols = uinv.indices(row);
  auto vals = uinv.values(row);
  double p = 0.0;
  for (std::size_t k = 0; k < cols.size(); ++k) p += vals[k] * ws.y[cols[k]];
  return p;
}

ProximityVector full_vector(const ProximityIndex& idx, NodeId q) {
  QueryWorkspace ws = prepare_query(idx, q);
  ProximityVector out;
  out.query = q;
  out.values.resize(idx.node_count());
  for (NodeId u = 0; u < idx.node_count(); ++u) out.values[u] = proximity_of(idx, ws, u);
  out.converged = true;
  return out;
}

}  // namespace rwr

#pragma once

#include <cstddef>
#include <vector>

#include "rwr/graph.hpp"
#include "rwr/index.hpp"

namespace rwr {

inline constexpr double kDefaultOracleTolerance = 1e-12;
inline constexpr std::size_t kDefaultOracleMaxIter = 10'000;

struct ProximityVector {
  NodeId query = 0;
  std::vector<double> values;
  bool converged = false;
  std::size_t iterations = 0;
};

/**
 * Fixed-point iteration p <- (1-c) A p + c e_q starting from e_q. Stops when
 * the max-norm change drops to `tol`. Not converging is reported through
 * `converged`, not an exception.
 */
ProximityVector iterative_rwr(const NormalizedMatrix& a, NodeId q, double c,
                              double tol = kDefaultOracleTolerance,
                              std::size_t max_iter = kDefaultOracleMaxIter);

/// Dense y = c * L^-1 e_{perm(q)}, shared by every proximity lookup of one query.
struct QueryWorkspace {
  NodeId query = 0;
  std::vector<double> y;
};

QueryWorkspace prepare_query(const ProximityIndex& idx, NodeId q);

/// Exact p_u as row perm(u) of U^-1 dotted with the workspace.
double proximity_of(const ProximityIndex& idx, const QueryWorkspace& ws, NodeId u);

/// proximity_of for every node.
ProximityVector full_vector(const ProximityIndex& idx, NodeId q);

}  // namespace rwr

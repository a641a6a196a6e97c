#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rwr/graph.hpp"

namespace rwr {

/**
 * Node -> partition assignment. Ids run 1..kappa for communities; id
 * kappa + 1 is the border partition holding every node that touches a
 * cross-community edge. A plain community detection result never uses it.
 */
struct Partitioning {
  std::uint32_t kappa = 0;
  std::vector<std::uint32_t> assign;

  std::uint32_t border() const noexcept { return kappa + 1; }
  std::size_t border_size() const;

  friend bool operator==(const Partitioning&, const Partitioning&) = default;
};

/// "node_label partition_id" per line, in node id order.
void write_partitioning(std::ostream& out, const Graph& g, const Partitioning& p);

struct LouvainResult {
  Partitioning partitioning;
  /// Modularity after each aggregation level; first entry is the singleton start.
  std::vector<double> level_modularity;
};

/// Modularity of `assign` on the symmetrized graph (self-loops count twice
/// toward degree). Any label values are accepted; equal labels share a community.
double modularity(const Graph& g, const std::vector<std::uint32_t>& assign);

/// Deterministic two-phase Louvain on the symmetrized weighted graph.
LouvainResult louvain(const Graph& g);
Partitioning louvain_partition(const Graph& g);

/// Ascending total degree, ties by ascending id.
Ordering degree_reorder(const Graph& g);

struct ClusteredOrdering {
  Ordering ordering;
  Partitioning partitioning;
};

ClusteredOrdering cluster_reorder(const Graph& g);
ClusteredOrdering hybrid_reorder(const Graph& g);

Ordering random_reorder(NodeId n, std::uint64_t seed);

enum class OrderingStrategy : std::uint8_t {
  kDegree = 0,
  kCluster = 1,
  kHybrid = 2,
  kRandom = 3,
  kIdentity = 4,
};

std::string_view to_string(OrderingStrategy s);
OrderingStrategy parse_ordering_strategy(std::string_view name);

/// Dispatch on `strategy`; `partitioning` is set for cluster and hybrid.
struct OrderingResult {
  Ordering ordering;
  std::optional<Partitioning> partitioning;
};

OrderingResult make_ordering(const Graph& g, OrderingStrategy strategy, std::uint64_t seed = 0);

}  // namespace rwr

#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "rwr/graph.hpp"

namespace rwr::gen {

/// G(n, m)-style random digraph: m distinct directed edges drawn uniformly.
struct RandomGraphParams {
  NodeId n = 100;
  std::uint64_t m = 500;
  bool weighted = false;     // weights uniform in [0.5, 2)
  bool self_loops = false;   // allow u -> u
  std::uint64_t seed = 0;
};
Graph erdos_renyi(const RandomGraphParams& p);

/// Symmetric planted partition: each unordered pair inside a block is an
/// edge with probability p_in, across blocks with p_out; both directions
/// are emitted. Node i belongs to block i * blocks / n.
struct PlantedPartitionParams {
  NodeId n = 1000;
  std::uint32_t blocks = 10;
  double p_in = 0.1;
  double p_out = 0.001;
  std::uint64_t seed = 0;
};
Graph planted_partition(const PlantedPartitionParams& p);
std::vector<std::uint32_t> planted_blocks(NodeId n, std::uint32_t blocks);

/// Node 0 linked both ways to leaves 1..n-1.
Graph star(NodeId n);
/// 0 - 1 - ... - n-1, both directions.
Graph path(NodeId n);
/// `count` disjoint complete digraphs of `size` nodes each.
Graph disjoint_cliques(std::uint32_t count, NodeId size);

/**
 * Parse "kind:key=value,..." e.g. "planted:n=1000,blocks=10,pin=0.1,pout=0.001,seed=3",
 * "er:n=200,m=1000,weighted=1,loops=0,seed=1", "star:n=6", "path:n=5",
 * "cliques:count=2,size=5".
 */
Graph from_spec(std::string_view spec);

}  // namespace rwr::gen

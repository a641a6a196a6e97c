#include "rwr/generators.hpp"

#include <charconv>
#include <map>
#include <random>
#include <set>
#include <string>

#include "rwr/errors.hpp"

namespace rwr::gen {

Graph erdos_renyi(const RandomGraphParams& p) {
  if (p.n == 0) return Graph::from_edges(0, {});
  const std::uint64_t slots =
      std::uint64_t{p.n} * (p.self_loops ? p.n : p.n - 1);
  if (p.m > slots) throw ParameterError("more edges requested than the graph can hold");

  std::mt19937_64 rng(p.seed);
  std::uniform_int_distribution<NodeId> pick(0, p.n - 1);
  std::uniform_real_distribution<double> weight(0.5, 2.0);
  std::set<std::pair<NodeId, NodeId>> seen;
  std::vector<Edge> edges;
  edges.reserve(p.m);
  while (edges.size() < p.m) {
    NodeId u = pick(rng);
    NodeId v = pick(rng);
    if (u == v && !p.self_loops) continue;
    if (!seen.emplace(u, v).second) continue;
    edges.push_back({u, v, p.weighted ? weight(rng) : 1.0});
  }
  return Graph::from_edges(p.n, std::move(edges));
}

std::vector<std::uint32_t> planted_blocks(NodeId n, std::uint32_t blocks) {
  std::vector<std::uint32_t> out(n);
  for (NodeId i = 0; i < n; ++i) {
    out[i] = static_cast<std::uint32_t>(std::uint64_t{i} * blocks / n);
  }
  return out;
}

Graph planted_partition(const PlantedPartitionParams& p) {
  if (p.blocks == 0 || p.blocks > p.n) throw ParameterError("block count must be in [1, n]");
  if (!(p.p_in >= 0 && p.p_in <= 1 && p.p_out >= 0 && p.p_out <= 1)) {
    throw ParameterError("edge probabilities must lie in [0, 1]");
  }
  const auto block = planted_blocks(p.n, p.blocks);
  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < p.n; ++u) {
    for (NodeId v = u + 1; v < p.n; ++v) {
      const double prob = block[u] == block[v] ? p.p_in : p.p_out;
      if (coin(rng) < prob) {
        edges.push_back({u, v, 1.0});
        edges.push_back({v, u, 1.0});
      }
    }
  }
  return Graph::from_edges(p.n, std::move(edges));
}

Graph star(NodeId n) {
  std::vector<Edge> edges;
  for (NodeId leaf = 1; leaf < n; ++leaf) {
    edges.push_back({0, leaf, 1.0});
    edges.push_back({leaf, 0, 1.0});
  }
  return Graph::from_edges(n, std::move(edges));
}

Graph path(NodeId n) {
  std::vector<Edge> edges;
  for (NodeId i = 0; i + 1 < n; ++i) {
    edges.push_back({i, i + 1, 1.0});
    edges.push_back({i + 1, i, 1.0});
  }
  return Graph::from_edges(n, std::move(edges));
}

Graph disjoint_cliques(std::uint32_t count, NodeId size) {
  std::vector<Edge> edges;
  for (std::uint32_t b = 0; b < count; ++b) {
    const NodeId base = b * size;
    for (NodeId i = 0; i < size; ++i) {
      for (NodeId j = 0; j < size; ++j) {
        if (i != j) edges.push_back({base + i, base + j, 1.0});
      }
    }
  }
  return Graph::from_edges(count * size, std::move(edges));
}

namespace {

class SpecArgs {
 public:
  explicit SpecArgs(std::string_view body) {
    while (!body.empty()) {
      auto comma = body.find(',');
      auto item = body.substr(0, comma);
      auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw ParameterError("generator argument '" + std::string(item) + "' lacks '='");
      }
      values_[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
      body = comma == std::string_view::npos ? std::string_view{} : body.substr(comma + 1);
    }
  }

  template <typename T>
  T get(const std::string& key, T fallback) {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const std::string text = it->second;
    values_.erase(it);
    T out{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      throw ParameterError("invalid value '" + text + "' for generator argument " + key);
    }
    return out;
  }

  void finish() const {
    if (!values_.empty()) {
      throw ParameterError("unknown generator argument '" + values_.begin()->first + "'");
    }
  }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace

Graph from_spec(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string kind(spec.substr(0, colon));
  SpecArgs args(colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1));
  Graph g;
  if (kind == "planted") {
    PlantedPartitionParams p;
    p.n = args.get<NodeId>("n", p.n);
    p.blocks = args.get<std::uint32_t>("blocks", p.blocks);
    p.p_in = args.get<double>("pin", p.p_in);
    p.p_out = args.get<double>("pout", p.p_out);
    p.seed = args.get<std::uint64_t>("seed", p.seed);
    g = planted_partition(p);
  } else if (kind == "er") {
    RandomGraphParams p;
    p.n = args.get<NodeId>("n", p.n);
    p.m = args.get<std::uint64_t>("m", std::uint64_t{p.n} * 5);
    p.weighted = args.get<int>("weighted", 0) != 0;
    p.self_loops = args.get<int>("loops", 0) != 0;
    p.seed = args.get<std::uint64_t>("seed", p.seed);
    g = erdos_renyi(p);
  } else if (kind == "star") {
    g = star(args.get<NodeId>("n", 6));
  } else if (kind == "path") {
    g = path(args.get<NodeId>("n", 5));
  } else if (kind == "cliques") {
    auto count = args.get<std::uint32_t>("count", 2);
    g = disjoint_cliques(count, args.get<NodeId>("size", 5));
  } else {
    throw ParameterError("unknown generator '" + kind + "'");
  }
  args.finish();
  return g;
}

}  // namespace rwr::gen

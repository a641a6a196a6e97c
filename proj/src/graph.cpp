#include "rwr/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "rwr/errors.hpp"

namespace rwr {

namespace {

std::vector<Edge> merge_sorted(std::vector<Edge> edges) {
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  });
  std::vector<Edge> merged;
  merged.reserve(edges.size());
  for (const Edge& e : edges) {
    if (!merged.empty() && merged.back().src == e.src && merged.back().dst == e.dst) {
      merged.back().weight += e.weight;
    } else {
      merged.push_back(e);
    }
  }
  return merged;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

Graph Graph::from_edges(NodeId n, std::vector<Edge> edges,
                        std::vector<std::string> labels) {
  if (n > kMaxNodes) throw ValidationError("node count exceeds 2^31 - 1");
  for (const Edge& e : edges) {
    if (e.src >= n || e.dst >= n) throw ValidationError("edge endpoint out of range");
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw ValidationError("edge weight must be positive and finite");
    }
  }
  if (labels.empty()) {
    labels.reserve(n);
    for (NodeId i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  }
  if (labels.size() != n) throw ValidationError("label table size differs from node count");

  Graph g;
  g.n_ = n;
  g.edges_ = merge_sorted(std::move(edges));
  g.labels_ = std::move(labels);
  g.ids_.reserve(n);
  for (NodeId i = 0; i < n; ++i) {
    if (!g.ids_.emplace(g.labels_[i], i).second) {
      throw ValidationError("duplicate node label '" + g.labels_[i] + "'");
    }
  }
  return g;
}

const std::string& Graph::label(NodeId id) const {
  if (id >= n_) throw LookupError("node id " + std::to_string(id) + " out of range");
  return labels_[id];
}

std::optional<NodeId> Graph::find(std::string_view label) const {
  auto it = ids_.find(std::string(label));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::uint32_t> Graph::degrees() const {
  std::vector<std::uint32_t> deg(n_, 0);
  for (const Edge& e : edges_) {
    ++deg[e.src];
    ++deg[e.dst];
  }
  return deg;
}

bool Graph::has_self_loops() const noexcept {
  return std::any_of(edges_.begin(), edges_.end(),
                     [](const Edge& e) { return e.src == e.dst; });
}

Graph load_edge_list(std::istream& in) {
  std::unordered_map<std::string, NodeId> ids;
  std::vector<std::string> labels;
  std::vector<Edge> edges;

  auto intern = [&](std::string_view token) {
    auto [it, inserted] = ids.try_emplace(std::string(token), static_cast<NodeId>(labels.size()));
    if (inserted) {
      if (labels.size() >= kMaxNodes) throw ValidationError("node count exceeds 2^31 - 1");
      labels.emplace_back(token);
    }
    return it->second;
  };

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto tokens = split_ws(line);
    if (tokens.empty() || tokens.front().front() == '#') continue;
    if (tokens.size() < 2 || tokens.size() > 3) {
      throw ParseError(line_no, "expected 'src dst [weight]', got " +
                                    std::to_string(tokens.size()) + " fields");
    }
    double weight = 1.0;
    if (tokens.size() == 3) {
      auto tok = tokens[2];
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), weight);
      if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw ParseError(line_no, "invalid weight '" + std::string(tok) + "'");
      }
      if (!(weight > 0.0) || !std::isfinite(weight)) {
        throw ValidationError("line " + std::to_string(line_no) +
                              ": weight must be positive and finite");
      }
    }
    NodeId src = intern(tokens[0]);
    NodeId dst = intern(tokens[1]);
    edges.push_back({src, dst, weight});
  }
  if (in.bad()) throw Error("read failure while loading edge list");

  auto n = static_cast<NodeId>(labels.size());
  return Graph::from_edges(n, std::move(edges), std::move(labels));
}

Graph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open graph file " + path.string());
  return load_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  auto old_prec = out.precision(17);
  for (const Edge& e : g.edges()) {
    out << g.label(e.src) << ' ' << g.label(e.dst);
    if (e.weight != 1.0) out << ' ' << e.weight;
    out << '\n';
  }
  out.precision(old_prec);
}

double CompressedMatrix::at(NodeId outer, NodeId inner) const {
  auto ids = indices(outer);
  auto it = std::lower_bound(ids.begin(), ids.end(), inner);
  if (it == ids.end() || *it != inner) return 0.0;
  return val[ptr[outer] + static_cast<std::size_t>(it - ids.begin())];
}

CompressedMatrix CompressedMatrix::transposed() const {
  CompressedMatrix t;
  t.n = n;
  t.ptr.assign(std::size_t{n} + 1, 0);
  for (NodeId i : idx) ++t.ptr[i + 1];
  for (NodeId k = 0; k < n; ++k) t.ptr[k + 1] += t.ptr[k];
  t.idx.resize(idx.size());
  t.val.resize(val.size());
  std::vector<std::uint64_t> next(t.ptr.begin(), t.ptr.end() - 1);
  // Outer slots are visited in ascending order, so inner indices of the
  // result come out sorted.
  for (NodeId outer = 0; outer < n; ++outer) {
    for (std::uint64_t k = ptr[outer]; k < ptr[outer + 1]; ++k) {
      std::uint64_t dst = next[idx[k]]++;
      t.idx[dst] = outer;
      t.val[dst] = val[k];
    }
  }
  return t;
}

NormalizedMatrix column_normalize(const Graph& g) {
  const NodeId n = g.node_count();
  std::vector<double> out_weight(n, 0.0);
  for (const Edge& e : g.edges()) out_weight[e.src] += e.weight;

  // Edges are sorted by (src, dst): each source's run is exactly one column
  // with ascending row indices.
  NormalizedMatrix a;
  a.columns.n = n;
  a.columns.ptr.assign(std::size_t{n} + 1, 0);
  a.columns.idx.reserve(g.edge_count());
  a.columns.val.reserve(g.edge_count());
  a.col_max.assign(n, 0.0);
  for (const Edge& e : g.edges()) {
    double p = e.weight / out_weight[e.src];
    a.columns.idx.push_back(e.dst);
    a.columns.val.push_back(p);
    ++a.columns.ptr[e.src + 1];
    a.col_max[e.src] = std::max(a.col_max[e.src], p);
  }
  for (NodeId v = 0; v < n; ++v) a.columns.ptr[v + 1] += a.columns.ptr[v];
  for (double m : a.col_max) a.global_max = std::max(a.global_max, m);
  return a;
}

Ordering Ordering::identity(NodeId n) {
  std::vector<NodeId> order(n);
  for (NodeId i = 0; i < n; ++i) order[i] = i;
  return from_order(std::move(order));
}

Ordering Ordering::from_order(std::vector<NodeId> order) {
  const auto n = order.size();
  if (n > kMaxNodes) throw ValidationError("ordering exceeds 2^31 - 1 nodes");
  Ordering o;
  o.perm_.assign(n, static_cast<NodeId>(n));
  for (std::size_t pos = 0; pos < n; ++pos) {
    NodeId orig = order[pos];
    if (orig >= n || o.perm_[orig] != n) {
      throw ValidationError("ordering is not a permutation of [0, n)");
    }
    o.perm_[orig] = static_cast<NodeId>(pos);
  }
  o.inv_perm_ = std::move(order);
  return o;
}

Ordering Ordering::inverse() const {
  // The inverse maps positions back to original ids, i.e. its order list is perm.
  return from_order(perm_);
}

NormalizedMatrix apply_ordering(const NormalizedMatrix& a, const Ordering& o) {
  const NodeId n = a.size();
  if (o.size() != n) {
    throw ValidationError("ordering size " + std::to_string(o.size()) +
                          " does not match matrix size " + std::to_string(n));
  }
  NormalizedMatrix out;
  out.columns.n = n;
  out.columns.ptr.assign(std::size_t{n} + 1, 0);
  out.columns.idx.reserve(a.columns.nnz());
  out.columns.val.reserve(a.columns.nnz());
  out.col_max.assign(n, 0.0);
  out.global_max = a.global_max;

  std::vector<std::pair<NodeId, double>> column;
  for (NodeId pos = 0; pos < n; ++pos) {
    NodeId v = o.original(pos);
    auto rows = a.columns.indices(v);
    auto vals = a.columns.values(v);
    column.clear();
    for (std::size_t k = 0; k < rows.size(); ++k) column.emplace_back(o.position(rows[k]), vals[k]);
    std::sort(column.begin(), column.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    for (const auto& [row, value] : column) {
      out.columns.idx.push_back(row);
      out.columns.val.push_back(value);
    }
    out.columns.ptr[pos + 1] = out.columns.idx.size();
    out.col_max[pos] = a.col_max[v];
  }
  return out;
}

}  // namespace rwr

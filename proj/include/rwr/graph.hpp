#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rwr {

using NodeId = std::uint32_t;

/// Largest node count accepted anywhere (32-bit ids, signed headroom).
inline constexpr std::uint64_t kMaxNodes = (std::uint64_t{1} << 31) - 1;

struct Edge {
  NodeId src;
  NodeId dst;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/**
 * Directed weighted graph over dense ids [0, n).
 *
 * Edges are kept sorted by (src, dst) with duplicates merged by weight sum.
 * Every node carries an external label; the label table is what the CLI
 * and the index file expose to users.
 */
class Graph {
 public:
  Graph() = default;

  /// Build from internal ids. Labels default to the decimal id.
  static Graph from_edges(NodeId n, std::vector<Edge> edges,
                          std::vector<std::string> labels = {});

  NodeId node_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }

  const std::string& label(NodeId id) const;
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::optional<NodeId> find(std::string_view label) const;

  /// in-degree + out-degree over distinct edges (a self-loop counts twice).
  std::vector<std::uint32_t> degrees() const;

  bool has_self_loops() const noexcept;

 private:
  NodeId n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> ids_;
};

/// Parse "src dst [weight]" lines. '#' starts a comment line; blank lines
/// are skipped; LF and CRLF both accepted. Ids are assigned in first
/// appearance order.
Graph load_edge_list(std::istream& in);
Graph load_edge_list(const std::filesystem::path& path);

void write_edge_list(std::ostream& out, const Graph& g);

/**
 * Square compressed sparse storage. Whether `ptr` indexes columns or rows
 * depends on the owner; indices inside each outer slot are ascending.
 */
struct CompressedMatrix {
  NodeId n = 0;
  std::vector<std::uint64_t> ptr{0};
  std::vector<NodeId> idx;
  std::vector<double> val;

  std::size_t nnz() const noexcept { return idx.size(); }

  std::span<const NodeId> indices(NodeId outer) const {
    return {idx.data() + ptr[outer], idx.data() + ptr[outer + 1]};
  }
  std::span<const double> values(NodeId outer) const {
    return {val.data() + ptr[outer], val.data() + ptr[outer + 1]};
  }

  /// Stored value at (outer, inner) or 0.
  double at(NodeId outer, NodeId inner) const;

  /// Same matrix with the other orientation (CSC <-> CSR).
  CompressedMatrix transposed() const;

  friend bool operator==(const CompressedMatrix&, const CompressedMatrix&) = default;
};

/**
 * Column-normalized transition matrix A. Column v holds the probabilities
 * of moving from v to each out-neighbour; dangling columns stay all-zero.
 */
struct NormalizedMatrix {
  CompressedMatrix columns;
  std::vector<double> col_max;
  double global_max = 0.0;

  NodeId size() const noexcept { return columns.n; }
  double self_loop(NodeId u) const { return columns.at(u, u); }

  friend bool operator==(const NormalizedMatrix&, const NormalizedMatrix&) = default;
};

NormalizedMatrix column_normalize(const Graph& g);

/// Bijection between original ids and factorization positions.
class Ordering {
 public:
  Ordering() = default;

  static Ordering identity(NodeId n);
  /// `order[k]` is the original id placed at position k.
  static Ordering from_order(std::vector<NodeId> order);

  NodeId size() const noexcept { return static_cast<NodeId>(perm_.size()); }
  NodeId position(NodeId original) const { return perm_[original]; }
  NodeId original(NodeId position) const { return inv_perm_[position]; }

  std::span<const NodeId> perm() const noexcept { return perm_; }
  std::span<const NodeId> inv_perm() const noexcept { return inv_perm_; }

  Ordering inverse() const;

  friend bool operator==(const Ordering&, const Ordering&) = default;

 private:
  std::vector<NodeId> perm_;
  std::vector<NodeId> inv_perm_;
};

/// A'[perm(u)][perm(v)] = A[u][v]. Values are copied, never recomputed.
NormalizedMatrix apply_ordering(const NormalizedMatrix& a, const Ordering& o);

}  // namespace rwr

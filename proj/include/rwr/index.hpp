#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rwr/graph.hpp"
#include "rwr/lu.hpp"
#include "rwr/reorder.hpp"

namespace rwr {

inline constexpr double kDefaultRestart = 0.95;

struct IndexOptions {
  double c = kDefaultRestart;
  OrderingStrategy strategy = OrderingStrategy::kHybrid;
  double drop_tolerance = 0.0;
  std::uint64_t seed = 0;  // random ordering only
};

/**
 * Everything a query needs: the inverse triangular factors of the reordered
 * system, the ordering that maps node ids into factor positions, and the
 * transition matrix (original ids) used for BFS and the upper bound.
 *
 * Immutable once built; share freely between threads.
 */
class ProximityIndex {
 public:
  double restart() const noexcept { return c_; }
  OrderingStrategy strategy() const noexcept { return strategy_; }
  double drop_tolerance() const noexcept { return drop_tolerance_; }
  std::uint32_t kappa() const noexcept { return kappa_; }
  NodeId node_count() const noexcept { return matrix_.size(); }
  std::uint64_t edge_count() const noexcept { return edge_count_; }

  const Ordering& ordering() const noexcept { return ordering_; }
  const NormalizedMatrix& matrix() const noexcept { return matrix_; }
  const InverseFactor& lower_inverse() const noexcept { return lower_inv_; }
  const InverseFactor& upper_inverse() const noexcept { return upper_inv_; }

  double col_max(NodeId u) const { return matrix_.col_max[u]; }
  double global_max() const noexcept { return matrix_.global_max; }
  double self_loop(NodeId u) const { return self_loop_[u]; }
  std::span<const double> self_loops() const noexcept { return self_loop_; }
  /// max over u of (1 - c) / (1 - A_uu + c A_uu); equals 1 - c without self-loops.
  double max_restart_factor() const noexcept { return max_restart_factor_; }

  const std::string& label(NodeId u) const;
  std::optional<NodeId> find(std::string_view label) const;
  /// Like find() but throws LookupError.
  NodeId require(std::string_view label) const;
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  friend bool operator==(const ProximityIndex& a, const ProximityIndex& b);

 private:
  friend ProximityIndex assemble_index(double, OrderingStrategy, double, std::uint32_t,
                                       std::uint64_t, Ordering, NormalizedMatrix,
                                       InverseFactor, InverseFactor, std::vector<std::string>);

  double c_ = kDefaultRestart;
  OrderingStrategy strategy_ = OrderingStrategy::kHybrid;
  double drop_tolerance_ = 0.0;
  std::uint32_t kappa_ = 0;
  std::uint64_t edge_count_ = 0;
  Ordering ordering_;
  NormalizedMatrix matrix_;
  std::vector<double> self_loop_;
  double max_restart_factor_ = 0.0;
  InverseFactor lower_inv_;
  InverseFactor upper_inv_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> ids_;
};

/// Validates and assembles an index from its parts.
ProximityIndex assemble_index(double c, OrderingStrategy strategy, double drop_tolerance,
                              std::uint32_t kappa, std::uint64_t edge_count, Ordering ordering,
                              NormalizedMatrix matrix, InverseFactor lower_inv,
                              InverseFactor upper_inv, std::vector<std::string> labels);

struct PrecomputeSummary {
  NodeId n = 0;
  std::uint64_t m = 0;
  std::optional<std::uint32_t> kappa;
  std::size_t border_size = 0;
  std::size_t nnz_lower_inverse = 0;
  std::size_t nnz_upper_inverse = 0;
  double seconds = 0.0;

  double nnz_ratio() const {
    return m == 0 ? 0.0 : static_cast<double>(nnz_lower_inverse + nnz_upper_inverse) / m;
  }
};

/// Reorder -> normalize -> W -> Crout -> invert.
ProximityIndex build_index(const Graph& g, const IndexOptions& opts,
                           PrecomputeSummary* summary = nullptr);

void print_summary(std::ostream& out, const PrecomputeSummary& s);

/**
 * Binary container, little-endian:
 *
 *   0  "KDSH"            4  u8 version        5  u8 ordering tag
 *   6  u16 reserved      8  u32 n             12 u32 kappa
 *   16 u64 m             24 f64 c             32 f64 drop tolerance
 *   40 u64 nnz(L^-1)     48 u64 nnz(U^-1)     56 u32 section count
 *   60 u32 CRC-32 of every byte after the 64-byte header
 *
 * followed by sections, each `u32 tag, u64 length, payload`.
 */
inline constexpr std::uint8_t kIndexVersion = 1;

void save_index(std::ostream& out, const ProximityIndex& idx);
void save_index(const std::filesystem::path& path, const ProximityIndex& idx);
ProximityIndex load_index(std::istream& in);
ProximityIndex load_index(const std::filesystem::path& path);

}  // namespace rwr

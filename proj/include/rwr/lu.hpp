#pragma once

#include <cstdint>

#include "rwr/graph.hpp"

namespace rwr {

/// Pivots with magnitude at or below this are treated as singular.
inline constexpr double kPivotTolerance = 1e-14;

/// W = I - (1 - c) A' stored column-major with a full diagonal.
struct SystemMatrix {
  double c = 0.0;
  CompressedMatrix columns;

  NodeId size() const noexcept { return columns.n; }
};

enum class TriangleKind : std::uint8_t { kLower, kUpper };

/**
 * Column-major triangular factor. A unit-diagonal factor (L) stores only
 * its strictly-lower part; U stores its diagonal explicitly.
 */
struct TriangularFactor {
  TriangleKind kind = TriangleKind::kLower;
  bool unit_diagonal = false;
  CompressedMatrix columns;

  NodeId size() const noexcept { return columns.n; }
};

/**
 * Inverse of a triangular factor, diagonal included. The lower inverse is
 * column-major (one column serves a query); the upper inverse is row-major
 * (one row serves one proximity).
 */
struct InverseFactor {
  TriangleKind kind = TriangleKind::kLower;
  CompressedMatrix storage;

  NodeId size() const noexcept { return storage.n; }
  std::size_t nnz() const noexcept { return storage.nnz(); }
  /// Entry (row, col) or 0 when not stored.
  double at(NodeId row, NodeId col) const;

  friend bool operator==(const InverseFactor&, const InverseFactor&) = default;
};

struct LuFactors {
  TriangularFactor lower;
  TriangularFactor upper;
};

SystemMatrix build_system(const NormalizedMatrix& reordered, double c);

/**
 * Crout factorization W = L U without pivoting. A symbolic pass derives
 * the fill pattern of every column from the structure alone; the numeric
 * pass then touches only structurally non-zero positions.
 */
LuFactors crout_lu(const SystemMatrix& w);

/// Options shared by both inversions. `drop_tolerance == 0` stores every
/// structurally non-zero entry, including numeric cancellations.
struct InversionOptions {
  double drop_tolerance = 0.0;
};

InverseFactor invert_lower(const TriangularFactor& l, InversionOptions opts = {});
InverseFactor invert_upper(const TriangularFactor& u, InversionOptions opts = {});

}  // namespace rwr

#include "rwr/lu.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rwr/errors.hpp"

namespace rwr {

namespace {

// Collects every node reachable from `seeds` through the adjacency
// `graph` (outer slot k lists successors of k), considering only slots
// below `limit`. Returns the set sorted ascending, which is a valid
// topological order because every edge k -> i has i > k.
class ReachFinder {
 public:
  explicit ReachFinder(NodeId n) : mark_(n, UINT32_MAX) {}

  template <typename Seeds>
  const std::vector<NodeId>& operator()(const CompressedMatrix& graph, NodeId limit,
                                        const Seeds& seeds, NodeId stamp) {
    out_.clear();
    stack_.clear();
    for (NodeId s : seeds) {
      if (mark_[s] != stamp) {
        mark_[s] = stamp;
        stack_.push_back(s);
      }
    }
    while (!stack_.empty()) {
      NodeId k = stack_.back();
      stack_.pop_back();
      out_.push_back(k);
      if (k >= limit) continue;
      for (NodeId i : graph.indices(k)) {
        if (mark_[i] != stamp) {
          mark_[i] = stamp;
          stack_.push_back(i);
        }
      }
    }
    std::sort(out_.begin(), out_.end());
    return out_;
  }

 private:
  std::vector<NodeId> mark_;
  std::vector<NodeId> stack_;
  std::vector<NodeId> out_;
};

bool keep(double value, bool diagonal, double tol) {
  return diagonal || tol <= 0.0 || std::abs(value) > tol;
}

void check_tolerance(InversionOptions opts) {
  if (!(opts.drop_tolerance >= 0.0) || !std::isfinite(opts.drop_tolerance)) {
    throw ParameterError("drop tolerance must be a finite non-negative number");
  }
}

}  // namespace

double InverseFactor::at(NodeId row, NodeId col) const {
  return kind == TriangleKind::kLower ? storage.at(col, row) : storage.at(row, col);
}

SystemMatrix build_system(const NormalizedMatrix& a, double c) {
  if (!(c > 0.0 && c < 1.0)) {
    throw ParameterError("restart probability must lie in (0, 1), got " + std::to_string(c));
  }
  const NodeId n = a.size();
  const double damp = 1.0 - c;
  SystemMatrix w;
  w.c = c;
  auto& cols = w.columns;
  cols.n = n;
  cols.ptr.assign(std::size_t{n} + 1, 0);
  cols.idx.reserve(a.columns.nnz() + n);
  cols.val.reserve(a.columns.nnz() + n);
  for (NodeId j = 0; j < n; ++j) {
    auto rows = a.columns.indices(j);
    auto vals = a.columns.values(j);
    bool diagonal_done = false;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const NodeId i = rows[k];
      if (!diagonal_done && i >= j) {
        diagonal_done = true;
        cols.idx.push_back(j);
        cols.val.push_back(i == j ? 1.0 - damp * vals[k] : 1.0);
        if (i == j) continue;
      }
      cols.idx.push_back(i);
      cols.val.push_back(-damp * vals[k]);
    }
    if (!diagonal_done) {
      cols.idx.push_back(j);
      cols.val.push_back(1.0);
    }
    cols.ptr[j + 1] = cols.idx.size();
  }
  return w;
}

LuFactors crout_lu(const SystemMatrix& w) {
  const NodeId n = w.size();
  const auto& wc = w.columns;

  // Symbolic pass: pattern of column j is the reach of W(:, j) through
  // the already-known columns of L.
  CompressedMatrix lpat;
  CompressedMatrix upat;
  lpat.n = upat.n = n;
  lpat.ptr.assign(std::size_t{n} + 1, 0);
  upat.ptr.assign(std::size_t{n} + 1, 0);
  {
    ReachFinder reach(n);
    for (NodeId j = 0; j < n; ++j) {
      const auto& pattern = reach(lpat, j, wc.indices(j), j);
      for (NodeId i : pattern) (i <= j ? upat.idx : lpat.idx).push_back(i);
      lpat.ptr[j + 1] = lpat.idx.size();
      upat.ptr[j + 1] = upat.idx.size();
      if (upat.idx.empty() || upat.idx.back() != j) {
        throw FactorizationError("structurally zero pivot in column " + std::to_string(j));
      }
    }
  }

  // Numeric pass over the fixed patterns, columns left to right.
  lpat.val.assign(lpat.idx.size(), 0.0);
  upat.val.assign(upat.idx.size(), 0.0);
  std::vector<double> x(n, 0.0);
  for (NodeId j = 0; j < n; ++j) {
    auto wrows = wc.indices(j);
    auto wvals = wc.values(j);
    for (std::size_t k = 0; k < wrows.size(); ++k) x[wrows[k]] = wvals[k];

    for (auto p = upat.ptr[j]; p < upat.ptr[j + 1]; ++p) {
      const NodeId k = upat.idx[p];
      const double xk = x[k];
      upat.val[p] = xk;
      x[k] = 0.0;
      if (k == j || xk == 0.0) continue;
      for (auto q = lpat.ptr[k]; q < lpat.ptr[k + 1]; ++q) x[lpat.idx[q]] -= lpat.val[q] * xk;
    }
    const double pivot = upat.val[upat.ptr[j + 1] - 1];
    if (!(std::abs(pivot) > kPivotTolerance)) {
      throw FactorizationError("pivot U(" + std::to_string(j) + "," + std::to_string(j) +
                               ") too small: " + std::to_string(pivot));
    }
    for (auto p = lpat.ptr[j]; p < lpat.ptr[j + 1]; ++p) {
      const NodeId i = lpat.idx[p];
      lpat.val[p] = x[i] / pivot;
      x[i] = 0.0;
    }
  }

  LuFactors f;
  f.lower.kind = TriangleKind::kLower;
  f.lower.unit_diagonal = true;
  f.lower.columns = std::move(lpat);
  f.upper.kind = TriangleKind::kUpper;
  f.upper.unit_diagonal = false;
  f.upper.columns = std::move(upat);
  return f;
}

InverseFactor invert_lower(const TriangularFactor& l, InversionOptions opts) {
  check_tolerance(opts);
  if (l.kind != TriangleKind::kLower || !l.unit_diagonal) {
    throw ParameterError("invert_lower expects a unit-lower factor");
  }
  const NodeId n = l.size();
  const auto& lc = l.columns;
  InverseFactor inv;
  inv.kind = TriangleKind::kLower;
  auto& out = inv.storage;
  out.n = n;
  out.ptr.assign(std::size_t{n} + 1, 0);

  ReachFinder reach(n);
  std::vector<double> x(n, 0.0);
  for (NodeId j = 0; j < n; ++j) {
    const NodeId seed[] = {j};
    const auto& pattern = reach(lc, n, seed, j);
    x[j] = 1.0;
    for (NodeId k : pattern) {
      const double xk = x[k];
      if (xk == 0.0) continue;
      for (auto q = lc.ptr[k]; q < lc.ptr[k + 1]; ++q) x[lc.idx[q]] -= lc.val[q] * xk;
    }
    for (NodeId i : pattern) {
      if (keep(x[i], i == j, opts.drop_tolerance)) {
        out.idx.push_back(i);
        out.val.push_back(x[i]);
      }
      x[i] = 0.0;
    }
    out.ptr[j + 1] = out.idx.size();
  }
  return inv;
}

InverseFactor invert_upper(const TriangularFactor& u, InversionOptions opts) {
  check_tolerance(opts);
  if (u.kind != TriangleKind::kUpper || u.unit_diagonal) {
    throw ParameterError("invert_upper expects an upper factor with stored diagonal");
  }
  const NodeId n = u.size();
  // Row i of U^-1 solves x^T U = e_i^T, a forward sweep over rows of U.
  const CompressedMatrix rows = u.columns.transposed();
  std::vector<double> diag(n, 0.0);
  for (NodeId k = 0; k < n; ++k) {
    auto cols = rows.indices(k);
    if (cols.empty() || cols.front() != k) {
      throw FactorizationError("upper factor missing diagonal at " + std::to_string(k));
    }
    diag[k] = rows.val[rows.ptr[k]];
    if (!(std::abs(diag[k]) > kPivotTolerance)) {
      throw FactorizationError("diagonal U(" + std::to_string(k) + "," + std::to_string(k) +
                               ") too small");
    }
  }

  InverseFactor inv;
  inv.kind = TriangleKind::kUpper;
  auto& out = inv.storage;
  out.n = n;
  out.ptr.assign(std::size_t{n} + 1, 0);

  ReachFinder reach(n);
  std::vector<double> x(n, 0.0);
  for (NodeId i = 0; i < n; ++i) {
    const NodeId seed[] = {i};
    const auto& pattern = reach(rows, n, seed, i);
    x[i] = 1.0;
    for (NodeId k : pattern) {
      x[k] /= diag[k];
      const double xk = x[k];
      if (xk == 0.0) continue;
      for (auto q = rows.ptr[k] + 1; q < rows.ptr[k + 1]; ++q) x[rows.idx[q]] -= rows.val[q] * xk;
    }
    for (NodeId j : pattern) {
      if (keep(x[j], i == j, opts.drop_tolerance)) {
        out.idx.push_back(j);
        out.val.push_back(x[j]);
      }
      x[j] = 0.0;
    }
    out.ptr[i + 1] = out.idx.size();
  }
  return inv;
}

}  // namespace rwr

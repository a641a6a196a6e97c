#include "doctest.h"
#include "rwr/errors.hpp"
#include "rwr/generators.hpp"
#include "rwr/lu.hpp"
#include "rwr/reorder.hpp"
#include "support.hpp"

using namespace rwr;
using testing::Dense;

namespace {

struct Pipeline {
  SystemMatrix w;
  LuFactors lu;
  InverseFactor linv, uinv;
};

Pipeline run(const Graph& g, const Ordering& o, double c = 0.95, double drop = 0.0) {
  Pipeline p;
  p.w = build_system(apply_ordering(column_normalize(g), o), c);
  p.lu = crout_lu(p.w);
  p.linv = invert_lower(p.lu.lower, {drop});
  p.uinv = invert_upper(p.lu.upper, {drop});
  return p;
}

/// W built densely from the edge list, then permuted: independent of build_system.
Dense dense_system(const Graph& g, const Ordering& o, double c) {
  Dense a = testing::dense_transition(g);
  const NodeId n = g.node_count();
  Dense w = testing::identity(n);
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) w[o.position(i)][o.position(j)] -= (1.0 - c) * a[i][j];
  }
  return w;
}

}  // namespace

TEST_CASE("2x2 two-cycle: hand-computed factors") {
  auto g = Graph::from_edges(2, {{0, 1, 1.0}, {1, 0, 1.0}});
  auto p = run(g, Ordering::identity(2));
  Dense l = testing::dense(p.lu.lower), u = testing::dense(p.lu.upper);
  CHECK(l[0][0] == 1.0);
  CHECK(l[1][0] == doctest::Approx(-0.05).epsilon(1e-15));
  CHECK(l[0][1] == 0.0);
  CHECK(u[0][0] == 1.0);
  CHECK(u[0][1] == doctest::Approx(-0.05).epsilon(1e-15));
  CHECK(u[1][1] == doctest::Approx(0.9975).epsilon(1e-15));
  CHECK(u[1][0] == 0.0);

  CHECK(p.linv.at(0, 0) == 1.0);
  CHECK(p.linv.at(1, 1) == 1.0);
  CHECK(p.linv.at(1, 0) == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(p.uinv.at(0, 0) == 1.0);
  CHECK(p.uinv.at(0, 1) == doctest::Approx(0.05 / 0.9975).epsilon(1e-15));
  CHECK(p.uinv.at(1, 1) == doctest::Approx(1.0 / 0.9975).epsilon(1e-15));
  CHECK(p.linv.nnz() == 3);
  CHECK(p.uinv.nnz() == 3);
}

TEST_CASE("storage orientation") {
  auto p = run(testing::random_graph(20, 60, false, false, 1), Ordering::identity(20));
  CHECK(p.lu.lower.unit_diagonal);
  CHECK_FALSE(p.lu.upper.unit_diagonal);
  CHECK(p.linv.kind == TriangleKind::kLower);
  CHECK(p.uinv.kind == TriangleKind::kUpper);
  // L stores strictly-lower columns; U^-1 rows start at the diagonal.
  for (NodeId j = 0; j < 20; ++j) {
    for (NodeId r : p.lu.lower.columns.indices(j)) CHECK(r > j);
    auto row = p.uinv.storage.indices(j);
    REQUIRE_FALSE(row.empty());
    CHECK(row.front() == j);
  }
}

TEST_CASE("factor and inverse products against dense oracles") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const NodeId n = 20 + static_cast<NodeId>(seed * 3);
    auto g = testing::random_graph(n, 4 * n, seed % 2 == 0, seed % 3 == 0, seed);
    auto o = seed % 4 == 0 ? Ordering::identity(n) : random_reorder(n, seed);
    const double c = seed % 5 == 0 ? 0.5 : 0.95;
    auto p = run(g, o, c);
    Dense l = testing::dense(p.lu.lower), u = testing::dense(p.lu.upper);
    Dense w = dense_system(g, o, c);
    CHECK(testing::max_abs_diff(testing::dense_from_columns(p.w.columns), w) <= 1e-15);
    CHECK(testing::max_abs_diff(testing::multiply(l, u), w) <= 1e-12);
    CHECK(testing::max_abs_diff(testing::multiply(l, testing::dense(p.linv)), testing::identity(n)) <= 1e-12);
    CHECK(testing::max_abs_diff(testing::multiply(u, testing::dense(p.uinv)), testing::identity(n)) <= 1e-12);
  }
}

TEST_CASE("block-zero structure on disjoint cliques") {
  auto g = gen::disjoint_cliques(2, 5);
  auto r = cluster_reorder(g);
  auto p = run(g, r.ordering);
  for (NodeId i = 0; i < 10; ++i) {
    for (NodeId j = 0; j < 10; ++j) {
      if (r.partitioning.assign[r.ordering.original(i)] != r.partitioning.assign[r.ordering.original(j)]) {
        CHECK(p.linv.at(i, j) == 0.0);
        CHECK(p.uinv.at(i, j) == 0.0);
      }
    }
  }
}

TEST_CASE("parameter validation") {
  auto a = column_normalize(testing::random_graph(5, 10, false, false, 0));
  CHECK_THROWS_AS(build_system(a, 1.0), ParameterError);
  CHECK_THROWS_AS(build_system(a, 0.0), ParameterError);
  CHECK_THROWS_AS(build_system(a, -0.1), ParameterError);
  auto lu = crout_lu(build_system(a, 0.95));
  CHECK_THROWS_AS(invert_lower(lu.lower, {-1.0}), ParameterError);
  CHECK_THROWS_AS(invert_lower(lu.upper), ParameterError);
  CHECK_THROWS_AS(invert_upper(lu.lower), ParameterError);
}

TEST_CASE("edgeless graph gives identity factors") {
  auto g = Graph::from_edges(4, {});
  auto p = run(g, Ordering::identity(4));
  CHECK(testing::dense_from_columns(p.w.columns) == testing::identity(4));
  CHECK(testing::dense(p.linv) == testing::identity(4));
  CHECK(testing::dense(p.uinv) == testing::identity(4));
}

TEST_CASE("drop tolerance trims small inverse entries") {
  auto g = testing::random_graph(60, 300, true, false, 9);
  auto exact = run(g, Ordering::identity(60));
  auto dropped = run(g, Ordering::identity(60), 0.95, 1e-6);
  CHECK(dropped.linv.nnz() <= exact.linv.nnz());
  CHECK(dropped.uinv.nnz() <= exact.uinv.nnz());
  for (NodeId i = 0; i < 60; ++i) {
    for (NodeId j = 0; j < 60; ++j) {
      double e = exact.linv.at(i, j), d = dropped.linv.at(i, j);
      CHECK((d == e || (d == 0.0 && std::abs(e) <= 1e-6) || i == j));
    }
  }
}

#include <random>
#include <sstream>

#include "doctest.h"
#include "rwr/errors.hpp"
#include "rwr/graph.hpp"
#include "support.hpp"

using namespace rwr;

namespace {

Graph parse(const std::string& text) {
  std::istringstream in(text);
  return load_edge_list(in);
}

}  // namespace

TEST_CASE("edge list: two-node cycle") {
  Graph g = parse("1 2\n2 1\n");
  CHECK(g.node_count() == 2);
  REQUIRE(g.edge_count() == 2);
  CHECK(g.edges()[0] == Edge{0, 1, 1.0});
  CHECK(g.edges()[1] == Edge{1, 0, 1.0});
  CHECK(g.label(0) == "1");
  CHECK(g.find("2") == NodeId{1});
}

TEST_CASE("edge list: duplicates merge by weight sum") {
  Graph g = parse("a b 2.0\na b 3.0\n");
  CHECK(g.node_count() == 2);
  REQUIRE(g.edge_count() == 1);
  CHECK(g.edges()[0] == Edge{0, 1, 5.0});
}

TEST_CASE("edge list: comments, blank lines, CRLF, tabs") {
  Graph g = parse("# header\r\n\r\nx\ty 0.5\r\n  # indented comment\ny z\r\n");
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 2);
  CHECK(g.labels() == std::vector<std::string>{"x", "y", "z"});
  CHECK(g.edges()[0].weight == 0.5);
}

TEST_CASE("edge list: errors carry line numbers") {
  SUBCASE("too few fields") {
    try {
      parse("1 2\n3\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("too many fields") { CHECK_THROWS_AS(parse("1 2 3 4\n"), ParseError); }
  SUBCASE("bad weight") { CHECK_THROWS_AS(parse("1 2 abc\n"), ParseError); }
  SUBCASE("non-positive weight") {
    CHECK_THROWS_AS(parse("1 2 0\n"), ValidationError);
    CHECK_THROWS_AS(parse("1 2 -1.5\n"), ValidationError);
  }
}

TEST_CASE("edge list: dictionary-sized file loads") {
  // Same shape as the 13,356-node / 120,238-edge dictionary graph.
  constexpr NodeId kNodes = 13'356;
  constexpr std::size_t kEdges = 120'238;
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<NodeId> pick(0, kNodes - 1);
  std::set<std::pair<NodeId, NodeId>> seen;
  std::ostringstream text;
  text << "# synthetic dictionary\n";
  // Touch every node once so the id space is complete.
  for (NodeId u = 0; u < kNodes; ++u) {
    NodeId v = (u + 1) % kNodes;
    seen.emplace(u, v);
    text << "w" << u << " w" << v << "\n";
  }
  while (seen.size() < kEdges) {
    NodeId u = pick(rng), v = pick(rng);
    if (u == v || !seen.emplace(u, v).second) continue;
    text << "w" << u << " w" << v << "\n";
  }
  Graph g = parse(text.str());
  CHECK(g.node_count() == kNodes);
  CHECK(g.edge_count() == kEdges);
}

TEST_CASE("column normalization") {
  SUBCASE("two-cycle") {
    auto a = column_normalize(parse("1 2\n2 1\n"));
    auto d = testing::dense_from_columns(a.columns);
    CHECK(d == testing::Dense{{0, 1}, {1, 0}});
    CHECK(a.col_max == std::vector<double>{1, 1});
    CHECK(a.global_max == 1.0);
  }
  SUBCASE("uniform split") {
    auto g = parse("a b\na c\n");
    auto a = column_normalize(g);
    CHECK(a.columns.at(0, 1) == 0.5);
    CHECK(a.columns.at(0, 2) == 0.5);
    CHECK(a.col_max[0] == 0.5);
    CHECK(a.col_max[1] == 0.0);  // dangling
  }
  SUBCASE("weighted split") {
    auto a = column_normalize(parse("a b 1\na c 3\n"));
    CHECK(a.columns.at(0, 1) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(a.columns.at(0, 2) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(a.global_max == doctest::Approx(0.75));
  }
  SUBCASE("self loop normalized like any edge") {
    auto a = column_normalize(parse("a a\na b\n"));
    CHECK(a.self_loop(0) == 0.5);
  }
}

TEST_CASE("column sums and maxima on random graphs") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto g = testing::random_graph(60, 200, seed % 2 == 0, seed % 3 == 0, seed);
    auto a = column_normalize(g);
    double global = 0.0;
    for (NodeId v = 0; v < a.size(); ++v) {
      auto vals = a.columns.values(v);
      double sum = 0.0, mx = 0.0;
      for (double x : vals) {
        CHECK(x > 0.0);
        CHECK(x <= 1.0);
        sum += x;
        mx = std::max(mx, x);
      }
      if (vals.empty()) {
        CHECK(sum == 0.0);
      } else {
        CHECK(std::abs(sum - 1.0) <= 1e-12);
      }
      CHECK(a.col_max[v] == mx);
      global = std::max(global, mx);
    }
    CHECK(a.global_max == global);
  }
}

TEST_CASE("orderings") {
  CHECK_THROWS_AS(Ordering::from_order({0, 0, 1}), ValidationError);
  CHECK_THROWS_AS(Ordering::from_order({0, 3}), ValidationError);
  auto o = Ordering::from_order({2, 0, 1});
  CHECK(o.position(2) == 0);
  CHECK(o.original(0) == 2);
  auto inv = o.inverse();
  for (NodeId u = 0; u < 3; ++u) CHECK(inv.position(o.position(u)) == u);
}

TEST_CASE("apply_ordering") {
  auto a = column_normalize(parse("1 2\n2 1\n"));
  SUBCASE("identity") { CHECK(apply_ordering(a, Ordering::identity(2)) == a); }
  SUBCASE("swap on a symmetric pattern") { CHECK(apply_ordering(a, Ordering::from_order({1, 0})) == a); }
  SUBCASE("size mismatch") { CHECK_THROWS_AS(apply_ordering(a, Ordering::identity(3)), ValidationError); }
}

TEST_CASE("apply_ordering: permute then inverse is bit-exact; entries land at perm positions") {
  std::mt19937_64 rng(7);
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    auto g = testing::random_graph(40, 160, true, seed % 2 == 1, seed);
    auto a = column_normalize(g);
    std::vector<NodeId> order(a.size());
    std::iota(order.begin(), order.end(), NodeId{0});
    std::shuffle(order.begin(), order.end(), rng);
    auto o = Ordering::from_order(order);
    auto b = apply_ordering(a, o);
    CHECK(b.global_max == a.global_max);
    for (NodeId v = 0; v < a.size(); ++v) {
      CHECK(b.col_max[o.position(v)] == a.col_max[v]);
      auto rows = a.columns.indices(v);
      auto vals = a.columns.values(v);
      for (std::size_t k = 0; k < rows.size(); ++k) {
        CHECK(b.columns.at(o.position(v), o.position(rows[k])) == vals[k]);
      }
    }
    CHECK(apply_ordering(b, o.inverse()) == a);
  }
}

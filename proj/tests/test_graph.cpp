#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "pco/graph.hpp"

using namespace pco;

TEST_SUITE("graph") {

TEST_CASE("in_degree") {
  auto mutual = DirectedGraph::from_in_neighbors({{1}, {0}});
  CHECK(in_degree(mutual, 0) == 1);

  DirectedGraph isolated(3);
  isolated.add_edge(0, 1);
  CHECK(in_degree(isolated, 2) == 0);

  auto k4 = complete_digraph(4);
  for (NodeId i = 0; i < 4; ++i) CHECK(in_degree(k4, i) == 3);

  CHECK_THROWS_AS((void)in_degree(k4, 4), GraphError);
}

TEST_CASE("edges are validated") {
  DirectedGraph g(3);
  CHECK_THROWS_AS(g.add_edge(1, 1), GraphError);
  g.add_edge(1, 0);
  CHECK_THROWS_AS(g.add_edge(1, 0), GraphError);
  CHECK_THROWS_AS(g.add_edge(3, 0), GraphError);
  CHECK(g.has_edge(1, 0));
  CHECK_FALSE(g.has_edge(0, 1));
  CHECK(g.out_neighbors(0).size() == 1);
}

TEST_CASE("in_slot indexes the sorted in-neighbor list") {
  auto g = DirectedGraph::from_in_neighbors({{3, 1}, {0}, {0, 1}, {2}});
  CHECK(g.in_slot(0, 1) == 0);
  CHECK(g.in_slot(0, 3) == 1);
  CHECK_THROWS_AS((void)g.in_slot(0, 2), GraphError);
}

TEST_CASE("robustness examples") {
  auto mutual = DirectedGraph::from_in_neighbors({{1}, {0}});
  CHECK(is_r_robust(mutual, 1));
  CHECK(is_r_robust(complete_digraph(4), 2));
  CHECK(is_r_robust(demo_graph(), 3));
  CHECK(max_robustness(complete_digraph(5)) == 3);
  CHECK(max_robustness(directed_ring(4)) == 1);

  DirectedGraph with_isolated(4);
  with_isolated.add_edge(0, 1);
  with_isolated.add_edge(1, 0);
  with_isolated.add_edge(2, 0);
  CHECK(max_robustness(with_isolated) == 0);
}

TEST_CASE("robustness guard and degenerate sizes") {
  CHECK_THROWS_AS((void)is_r_robust(DirectedGraph(1), 1), GraphError);
  CHECK_THROWS_AS((void)is_r_robust(complete_digraph(6), 2, 5), GraphError);
  CHECK_NOTHROW((void)is_r_robust(complete_digraph(6), 2, 6));
}

TEST_CASE("demo graph admits attackers on nodes 0 and 3") {
  const auto g = demo_graph();
  CHECK(g.node_count() == 8);
  CHECK(max_robustness(g) == 3);
  for (NodeId i = 0; i < g.node_count(); ++i) {
    if (i == 0 || i == 3) continue;
    CHECK_FALSE((g.has_edge(i, 0) && g.has_edge(i, 3)));
  }
}

TEST_CASE("random_digraph") {
  CHECK(random_digraph(5, 1.0, 7) == complete_digraph(5));
  CHECK(random_digraph(5, 0.0, 7).edge_count() == 0);
  CHECK(random_digraph(6, 0.4, 11) == random_digraph(6, 0.4, 11));
  CHECK_THROWS((void)random_digraph(1, 0.5, 1));
}

TEST_CASE("robustness agrees with the naive enumerator for N <= 5") {
  std::size_t graphs = 0;
  for (std::size_t n = 2; n <= 5; ++n) {
    for (double p : {0.2, 0.4, 0.6, 0.8, 1.0}) {
      for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const auto g = random_digraph(n, p, seed * 31 + n);
        for (std::size_t r = 1; r <= n; ++r) {
          INFO("n=" << n << " p=" << p << " seed=" << seed << " r=" << r);
          CHECK(is_r_robust(g, r) == oracle::naive_r_robust(g, r));
        }
        ++graphs;
      }
    }
  }
  CHECK(graphs == 240);
}

TEST_CASE("robustness is monotone in r and implies the in-degree bound") {
  std::size_t count = 0;
  for (double p : {0.3, 0.5, 0.8}) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const std::size_t n = 3 + seed % 5;
      const auto g = random_digraph(n, p, 1000 + seed);
      for (std::size_t r = 2; r <= n; ++r) {
        if (is_r_robust(g, r)) CHECK(is_r_robust(g, r - 1));
      }
      for (std::size_t f = 1; 2 * f + 1 <= n; ++f) {
        if (!is_r_robust(g, 2 * f + 1)) continue;
        for (NodeId i = 0; i < n; ++i) CHECK(in_degree(g, i) >= 2 * f + 1);
      }
      ++count;
    }
  }
  CHECK(count >= 100);
}

TEST_CASE("text format round trip") {
  const auto g = demo_graph();
  CHECK(parse_graph(format_graph(g)) == g);

  const auto parsed = parse_graph(
      "# triangle\n"
      "3\n"
      "0 <- 1 2   # both\n"
      "1 <- 0\n"
      "\n"
      "2 <- 0 1\n");
  CHECK(parsed.edge_count() == 5);
  CHECK(parsed.has_edge(0, 2));
  CHECK_THROWS_AS(parse_graph("2\n0 <- 0\n"), GraphError);
  CHECK_THROWS_AS(parse_graph("2\n0 < 1\n"), GraphError);
  CHECK_THROWS_AS(parse_graph("x\n"), GraphError);
}

}  // TEST_SUITE

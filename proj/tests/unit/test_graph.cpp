#include <limits>
#include <sstream>

#include "doctest.h"
#include "generators.hpp"
#include "orc/error.hpp"
#include "orc/graph.hpp"

using namespace orc;
using graph::Graph;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an orc::Error");
  return ErrorKind::ConfigError;
}

// Bellman-Ford from every source; infinity encoded as nullopt.
std::vector<std::vector<std::optional<Rational>>> bellman_ford(const Graph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<std::optional<Rational>>> d(n, std::vector<std::optional<Rational>>(n));
  for (std::size_t s = 0; s < n; ++s) {
    d[s][s] = Rational(0);
    for (std::size_t round = 0; round + 1 < n; ++round) {
      bool changed = false;
      for (const auto& e : g.edges()) {
        for (auto [a, b] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
          if (d[s][a] && (!d[s][b] || *d[s][a] + e.w < *d[s][b])) {
            d[s][b] = *d[s][a] + e.w;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
  }
  return d;
}

}  // namespace

TEST_CASE("edge list parsing with default unit weights") {
  const Graph g = graph::parse_graph("0 1\n1 2", graph::GraphFormat::EdgeList);
  CHECK(g.vertex_count() == 3);
  REQUIRE(g.edge_count() == 2);
  CHECK(g.edges()[0].w == 1);
  CHECK(g.edges()[1].u == 1);
  CHECK(g.edges()[1].v == 2);
}

TEST_CASE("edge list with weights and comments") {
  const Graph g = graph::parse_graph("# header\n0 1 2.5  # trailing\n\n", graph::GraphFormat::EdgeList);
  CHECK(g.vertex_count() == 2);
  CHECK(g.edges()[0].w == Rational(5, 2));
}

TEST_CASE("json graph input") {
  const Graph g = graph::parse_graph(R"({"n": 4, "edges": [[0, 1], [1, 2, "3/2"], [3, 2, 2]]})",
                                     graph::GraphFormat::Json);
  CHECK(g.vertex_count() == 4);
  CHECK(g.edge_count() == 3);
  CHECK(g.edges()[1].w == Rational(3, 2));
  CHECK(g.edges()[2].u == 2);
  CHECK(g.edges()[2].v == 3);
}

TEST_CASE("ingestion errors") {
  using F = graph::GraphFormat;
  CHECK(kind_of([] { graph::parse_graph("0 1 -1", F::EdgeList); }) == ErrorKind::InvalidWeight);
  CHECK(kind_of([] { graph::parse_graph("0 1 0", F::EdgeList); }) == ErrorKind::InvalidWeight);
  CHECK(kind_of([] { graph::parse_graph("0 1\n1 0", F::EdgeList); }) == ErrorKind::DuplicateEdge);
  CHECK(kind_of([] { graph::parse_graph("2 2", F::EdgeList); }) == ErrorKind::SelfLoop);
  CHECK(kind_of([] { graph::parse_graph("0 x", F::EdgeList); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { graph::parse_graph("0 1 2 3", F::EdgeList); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { graph::parse_graph("{\"n\": 2, \"edges\": [[0, 5]]}", F::Json); }) ==
        ErrorKind::VertexOutOfRange);
  CHECK(kind_of([] { graph::parse_graph("{oops", F::Json); }) == ErrorKind::ParseError);
}

TEST_CASE("load_graph reads a stream") {
  std::istringstream in("0 1 3\n");
  const Graph g = graph::load_graph(in, graph::GraphFormat::EdgeList);
  CHECK(g.edges()[0].w == 3);
}

TEST_CASE("geodesic examples") {
  const Graph tri(3, {{0, 1, Rational(1)}, {1, 2, Rational(1)}, {0, 2, Rational(3)}});
  const auto d = graph::all_pairs_geodesic<Rational>(tri);
  CHECK(d(0, 2) == 2);
  CHECK(d(2, 0) == 2);

  const Graph path(3, {{0, 1, Rational(1)}, {1, 2, Rational(1)}});
  CHECK(graph::all_pairs_geodesic<Rational>(path)(0, 2) == 2);

  const Graph apart(2, {});
  const auto da = graph::all_pairs_geodesic<double>(apart);
  CHECK_FALSE(da.finite(0, 1));
  CHECK(da.as_double(0, 1) == std::numeric_limits<double>::infinity());
  CHECK_FALSE(da.all_finite());
}

TEST_CASE("APSP agrees with Bellman-Ford and satisfies metric axioms") {
  testgen::Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = testgen::uniform(rng, 2, 64);
    const Graph g = testgen::random_connected(n, testgen::uniform(rng, 0, 3 * n), rng);
    const auto oracle = bellman_ford(g);
    for (auto algo : {graph::ApspAlgorithm::Dijkstra, graph::ApspAlgorithm::FloydWarshall}) {
      const auto d = graph::all_pairs_geodesic<Rational>(g, {algo, 0});
      bool ok = true;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          ok = ok && d.finite(i, j) && *oracle[i][j] == d(i, j) && d(i, j) == d(j, i);
          for (std::size_t k = 0; k < n && ok; k += 7) ok = d(i, k) <= d(i, j) + d(j, k);
        }
        ok = ok && d(i, i) == 0;
      }
      for (const auto& e : g.edges()) ok = ok && d(e.u, e.v) <= e.w;
      CHECK(ok);
    }
  }
}

TEST_CASE("APSP output is independent of thread count and algorithm") {
  testgen::Rng rng(5);
  const Graph g = testgen::random_connected(120, 300, rng);
  const auto one = graph::all_pairs_geodesic<double>(g, {graph::ApspAlgorithm::Dijkstra, 1});
  const auto many = graph::all_pairs_geodesic<double>(g, {graph::ApspAlgorithm::Dijkstra, 8});
  CHECK(one == many);
  const auto r1 = graph::all_pairs_geodesic<Rational>(g, {graph::ApspAlgorithm::Dijkstra, 1});
  const auto r4 = graph::all_pairs_geodesic<Rational>(g, {graph::ApspAlgorithm::Auto, 4});
  CHECK(r1 == r4);
}

TEST_CASE("float Floyd-Warshall matches float Dijkstra on integer weights") {
  testgen::Rng rng(9);
  const Graph g = testgen::random_connected(40, 600, rng);
  const auto fw = graph::all_pairs_geodesic<double>(g, {graph::ApspAlgorithm::FloydWarshall, 1});
  const auto dj = graph::all_pairs_geodesic<double>(g, {graph::ApspAlgorithm::Dijkstra, 1});
  CHECK(fw == dj);
}

TEST_CASE("disconnected components stay infinite under both algorithms") {
  const Graph g(4, {{0, 1, Rational(1)}, {2, 3, Rational(2)}});
  for (auto algo : {graph::ApspAlgorithm::Dijkstra, graph::ApspAlgorithm::FloydWarshall}) {
    const auto d = graph::all_pairs_geodesic<Rational>(g, {algo, 0});
    CHECK(d.finite(0, 1));
    CHECK_FALSE(d.finite(0, 2));
    CHECK_FALSE(d.finite(3, 1));
    CHECK(d(2, 3) == 2);
  }
}

TEST_CASE("neighborhood of the middle edge of a path") {
  const Graph g = graph::parse_graph("0 1\n1 2\n2 3", graph::GraphFormat::EdgeList);
  const auto d = graph::all_pairs_geodesic<Rational>(g);
  const auto nb = graph::neighborhood(g, d, 1, 2);
  CHECK(nb.X == std::vector<graph::Vertex>{0});
  CHECK(nb.Y == std::vector<graph::Vertex>{3});
  CHECK(nb.cost(0, 0) == 3);
  CHECK(nb.dxy == 1);

  const auto wide = graph::neighborhood(g, d, 1, 2, true);
  CHECK(wide.X == std::vector<graph::Vertex>{0, 1});
  CHECK(wide.Y == std::vector<graph::Vertex>{3, 2});
}

TEST_CASE("neighborhood errors") {
  const Graph star = graph::parse_graph("0 1\n0 2\n0 3", graph::GraphFormat::EdgeList);
  const auto d = graph::all_pairs_geodesic<Rational>(star);
  CHECK(kind_of([&] { graph::neighborhood(star, d, 0, 1); }) == ErrorKind::EmptyNeighborhood);
  CHECK(kind_of([&] { graph::neighborhood(star, d, 1, 2); }) == ErrorKind::NotAnEdge);
}

TEST_CASE("verify_tree and internal_edges") {
  using F = graph::GraphFormat;
  CHECK(graph::verify_tree(graph::parse_graph("0 1\n1 2", F::EdgeList)));
  CHECK_FALSE(graph::verify_tree(graph::parse_graph("0 1\n1 2\n0 2", F::EdgeList)));
  CHECK_FALSE(graph::verify_tree(Graph(4, {{0, 1, Rational(1)}, {2, 3, Rational(1)}})));
  const auto internal = graph::internal_edges(graph::parse_graph("0 1\n1 2\n2 3", F::EdgeList));
  REQUIRE(internal.size() == 1);
  CHECK(internal[0] == std::pair<graph::Vertex, graph::Vertex>{1, 2});
}

TEST_CASE("weights are stored in lowest terms") {
  Rational w(4, 6);  // deliberately not canonical
  const Graph g(2, {{0, 1, w}});
  CHECK(g.edges()[0].w.get_den() == 3);
  const Graph h = g.scaled(Rational(6, 4));
  CHECK(h.edges()[0].w == 1);
  CHECK(h.edges()[0].w.get_den() == 1);
}

TEST_CASE("scaled graph multiplies weights") {
  const Graph g = graph::parse_graph("0 1 2\n1 2 3", graph::GraphFormat::EdgeList);
  const Graph h = g.scaled(Rational(1, 2));
  CHECK(h.edges()[0].w == 1);
  CHECK(h.edges()[1].w == Rational(3, 2));
}

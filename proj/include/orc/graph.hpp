#pragma once

#include <cstddef>
#include <istream>
#include <limits>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "orc/numeric.hpp"

namespace orc::graph {

using Vertex = std::size_t;

struct Edge {
  Vertex u = 0;  // u < v after construction
  Vertex v = 0;
  Rational w{1};
};

/// Weighted undirected simple graph. Weights are kept exact; float-mode
/// computations convert on the way out.
class Graph {
 public:
  Graph() = default;

  /// Normalizes every edge to u < v. Throws SelfLoop, DuplicateEdge,
  /// InvalidWeight or VertexOutOfRange.
  Graph(std::size_t vertex_count, std::vector<Edge> edges);

  std::size_t vertex_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  /// Neighbors in ascending vertex order.
  const std::vector<Vertex>& neighbors(Vertex v) const { return adj_.at(v); }
  std::size_t degree(Vertex v) const { return adj_.at(v).size(); }

  std::optional<std::size_t> edge_index(Vertex a, Vertex b) const;
  bool has_edge(Vertex a, Vertex b) const { return edge_index(a, b).has_value(); }

  /// Copy with every weight multiplied by factor (> 0).
  Graph scaled(const Rational& factor) const;

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> adj_;
  std::vector<std::vector<std::size_t>> adj_edge_;
};

enum class GraphFormat { EdgeList, Json };

/// Edge list: "u v [w]" per line, '#' starts a comment. JSON:
/// {"n": N, "edges": [[u, v, w], ...]}. Missing weights default to 1.
Graph load_graph(std::istream& source, GraphFormat format);
Graph parse_graph(std::string_view text, GraphFormat format);

/// True iff g is connected and has exactly N - 1 edges.
bool verify_tree(const Graph& g);

/// Edges (x, y) where both x and y have at least one other neighbor.
std::vector<std::pair<Vertex, Vertex>> internal_edges(const Graph& g);

// ---------------------------------------------------------------------------

/// All-pairs geodesic distances. Unreachable pairs are flagged rather than
/// stored as a sentinel so the exact and float modes behave the same.
template <typename T>
class GeodesicMatrix {
 public:
  GeodesicMatrix() = default;
  explicit GeodesicMatrix(std::size_t n)
      : n_(n), d_(n * n, T(0)), finite_(n * n, 0) {
    for (std::size_t i = 0; i < n; ++i) finite_[i * n + i] = 1;
  }

  std::size_t size() const noexcept { return n_; }
  bool finite(std::size_t i, std::size_t j) const { return finite_[i * n_ + j] != 0; }
  const T& operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  double as_double(std::size_t i, std::size_t j) const {
    return finite(i, j) ? to_double(d_[i * n_ + j])
                        : std::numeric_limits<double>::infinity();
  }

  void set(std::size_t i, std::size_t j, const T& value) {
    d_[i * n_ + j] = value;
    finite_[i * n_ + j] = 1;
  }
  void set_infinite(std::size_t i, std::size_t j) {
    d_[i * n_ + j] = T(0);
    finite_[i * n_ + j] = 0;
  }

  bool all_finite() const;
  /// Largest finite entry (0 for an empty matrix).
  T max_finite() const;

  friend bool operator==(const GeodesicMatrix& a, const GeodesicMatrix& b) {
    return a.n_ == b.n_ && a.finite_ == b.finite_ && a.d_ == b.d_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<T> d_;
  std::vector<unsigned char> finite_;
};

enum class ApspAlgorithm { Auto, Dijkstra, FloydWarshall };

struct ApspOptions {
  ApspAlgorithm algorithm = ApspAlgorithm::Auto;
  std::size_t threads = 0;  // 0 = hardware concurrency
};

/// Dijkstra from every source in parallel; Floyd–Warshall for dense graphs
/// with N <= 512. Output is independent of the thread count.
template <typename T>
GeodesicMatrix<T> all_pairs_geodesic(const Graph& g, const ApspOptions& options = {});

// ---------------------------------------------------------------------------

/// The (x, y) edge context: neighbors of x without y, neighbors of y
/// without x, and the local cost matrix between them.
template <typename T>
struct LocalNeighborhood {
  Vertex x = 0;
  Vertex y = 0;
  std::vector<Vertex> X;
  std::vector<Vertex> Y;
  Matrix<T> cost;  // cost(i, j) = d_G(X[i], Y[j])
  T dxy{0};

  std::size_t p() const noexcept { return X.size(); }
  std::size_t q() const noexcept { return Y.size(); }
};

/// Throws NotAnEdge or EmptyNeighborhood. With include_endpoints, x is
/// appended to X and y to Y.
template <typename T>
LocalNeighborhood<T> neighborhood(const Graph& g, const GeodesicMatrix<T>& dg,
                                  Vertex x, Vertex y, bool include_endpoints = false);

/// Neighborhood assembled from an explicit cost matrix (fixture input).
template <typename T>
LocalNeighborhood<T> neighborhood_from_cost(Matrix<T> cost, T dxy);

}  // namespace orc::graph

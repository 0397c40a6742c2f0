#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "orc/graph.hpp"
#include "orc/numeric.hpp"

namespace orc::transport {

/// Optimal coupling of the uniform measures on X (rows, mass 1/p each)
/// and Y (columns, mass 1/q each).
template <typename T>
struct TransportPlan {
  std::size_t p = 0;
  std::size_t q = 0;
  Matrix<T> gamma;
  T cost_value{0};
};

/// pi[i] is the row assigned to column i; cost_value = (1/p) sum_i cost(pi[i], i).
template <typename T>
struct AssignmentSolution {
  std::size_t p = 0;
  std::vector<std::size_t> pi;
  T cost_value{0};
};

enum class Method { Lp, Tree, Assignment, BruteForce, QsimTree, QsimPq };

std::string_view method_name(Method m) noexcept;
/// Throws ConfigError for unknown names.
Method parse_method(std::string_view name);

template <typename T>
struct CurvatureResult {
  graph::Vertex x = 0;
  graph::Vertex y = 0;
  T w1{0};
  T dxy{0};
  T curvature{0};
  Method method = Method::Lp;
};

/// General W1 as a transportation LP, solved as an integral min-cost flow
/// (q units out of every row, p units into every column) by successive
/// shortest paths with potentials. Throws InfiniteCost.
template <typename T>
TransportPlan<T> w1_lp(const graph::LocalNeighborhood<T>& nb);
template <typename T>
TransportPlan<T> w1_lp(const Matrix<T>& cost);

/// Tree closed form: mean(d(x_i, x)) + d(x, y) + mean(d(y, y_j)).
/// The caller is responsible for the graph being a tree.
template <typename T>
T w1_tree(const graph::LocalNeighborhood<T>& nb, const graph::GeodesicMatrix<T>& dg);

/// Checked variant: throws NotATree unless verify_tree(g).
template <typename T>
T w1_tree_checked(const graph::Graph& g, const graph::LocalNeighborhood<T>& nb,
                  const graph::GeodesicMatrix<T>& dg);

/// Hungarian algorithm; the lexicographically smallest optimal permutation
/// is returned for p <= 24. Throws NonSquare.
template <typename T>
AssignmentSolution<T> w1_assignment(const Matrix<T>& cost);

/// Exhaustive search over all p! permutations (p <= 9, else TooLarge).
template <typename T>
AssignmentSolution<T> w1_bruteforce(const Matrix<T>& cost);

/// Minimum over every basic feasible solution of the transportation
/// polytope, i.e. over all spanning trees of K_{p,q}. p + q <= 9.
template <typename T>
T lp_vertex_oracle(const Matrix<T>& cost);

/// curvature = 1 - w1 / dxy.
template <typename T>
CurvatureResult<T> make_result(const graph::LocalNeighborhood<T>& nb, T w1, Method method);

/// Classical routes only (Lp, Tree, Assignment, BruteForce). Tree needs the
/// graph and its geodesics; pass nullptr for cost-matrix instances.
template <typename T>
CurvatureResult<T> curvature(const graph::LocalNeighborhood<T>& nb, Method method,
                             const graph::Graph* g = nullptr,
                             const graph::GeodesicMatrix<T>* dg = nullptr);

}  // namespace orc::transport

#pragma once
// Classical simulation of the two quantum W1 estimators: neighbourhood sums
// on trees via overlaps, and the p = q case via a permutation-restricted
// minimum eigenvalue of the tensor-sum operator D_P.
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "orc/blockenc.hpp"
#include "orc/graph.hpp"
#include "orc/numeric.hpp"
#include "orc/transport.hpp"

namespace orc::qorc {

struct DistanceEncodingMeta {
  double alpha = 0.0;    // subnorm of the d^4 operator
  double alpha_q = 0.0;  // subnorm of the d operator after the fourth root
  double kappa = 1.0;    // max/min nonzero d^4
};

struct DistanceEncoding {
  qsim::BlockEncoding be;  // diagonal over the N x N grid, index i * N + j
  DistanceEncodingMeta meta;
  std::size_t n = 0;
};

struct EigenEstimate {
  double value = 0.0;
  std::size_t iterations = 0;
  double initial_overlap = 0.0;
  double gap_proxy = 0.0;  // +inf when every nonzero eigenvalue coincides
  bool converged = false;
  bool kernel_hit = false;  // a permutation sum was zero; value is 0
  std::vector<double> rq_history;
};

/// One audit-trace line. ledger_dev is the largest deviation between
/// encoded * subnorm and the intended classical value, when one exists.
struct AuditRecord {
  std::string stage;
  std::size_t dim = 0;
  double subnorm = 0.0;
  double err = 0.0;
  double min_entry = 0.0;
  double max_entry = 0.0;
  std::optional<double> ledger_dev;
  std::vector<std::pair<std::string, double>> extras;
};

enum class PiRoute { Direct, Purified };

struct QsimConfig {
  double margin = 0.05;
  double eps = 1e-10;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> shots;  // tree case only
  std::size_t cap = 1'000'000;
  std::size_t max_iter = 200'000;
  PiRoute pi_route = PiRoute::Direct;
  qsim::SpectralOptions spectral;
  bool include_endpoints = false;
  double debug_alpha_q_factor = 1.0;  // != 1 corrupts the recovery multiplier
  std::vector<AuditRecord>* trace = nullptr;
};

struct QsimResult {
  transport::CurvatureResult<double> result;
  std::size_t p = 0;
  std::size_t q = 0;
  DistanceEncodingMeta meta;
  std::optional<EigenEstimate> eigen;
  std::optional<double> std_error;  // shot mode: propagated SE of w1
};

/// Throws InfiniteDistance or DegenerateAllZero.
DistanceEncoding build_distance_encoding(const graph::GeodesicMatrix<double>& dg, double margin,
                                         const qsim::SpectralOptions& spectral = {});

/// Paper-normalized overlap (1 / (alpha_q (p + 1))) sum_i d(center, nbrs[i]).
/// With shots set, the underlying overlap is sampled; *std_error receives the
/// standard error in the same units.
double tree_overlap_sum(const DistanceEncoding& enc, std::size_t center,
                        std::span<const std::size_t> nbrs,
                        const qsim::OverlapOptions& shots = {}, double* std_error = nullptr);

QsimResult w1_tree_qsim(const graph::Graph& g, const graph::GeodesicMatrix<double>& dg,
                        graph::Vertex x, graph::Vertex y, const QsimConfig& config,
                        const DistanceEncoding* prebuilt = nullptr);

/// p^2-dimensional encoding of d(X[i], Y[j]) / alpha_q at position j * p + i.
qsim::BlockEncoding localize_DG(const DistanceEncoding& enc, std::span<const std::size_t> X,
                                std::span<const std::size_t> Y);

/// diag(d_{1i}, ..., d_{pi}) / alpha_q for the one-based column i.
qsim::BlockEncoding extract_Di(const qsim::BlockEncoding& dg_local, std::size_t i);

/// Tensor-sum over p^p: entry (i_1..i_p) = (d_{i_1 1} + ... + d_{i_p p}) / (p alpha_q).
qsim::BlockEncoding build_DP(std::span<const qsim::BlockEncoding> ds,
                             std::size_t cap = 1'000'000);

/// Zero-based k = sum_j (i_j - 1) p^(p - j) for one-based digits.
std::size_t perm_index(std::span<const std::size_t> digits, std::size_t p);

/// One-based digits of k (inverse of perm_index).
std::vector<std::size_t> perm_digits(std::size_t k, std::size_t p);

/// Projector onto distinct-digit indices, encoded as Pi / p!.
qsim::BlockEncoding build_Pi(std::size_t p, PiRoute route, std::size_t cap = 1'000'000);

/// Minimum nonzero eigenvalue of a diagonal encoding through power
/// iteration on its pseudoinverse. Throws ZeroOverlap; a non-converged run
/// comes back with converged = false.
EigenEstimate min_eigen_power(const qsim::BlockEncoding& be, double kappa_A, double eps,
                              std::uint64_t seed, std::size_t max_iter);

QsimResult w1_pq_qsim(const graph::Graph& g, const graph::GeodesicMatrix<double>& dg,
                      graph::Vertex x, graph::Vertex y, const QsimConfig& config,
                      const DistanceEncoding* prebuilt = nullptr);

/// Square cost-matrix instance. A pseudo-geodesic matrix over the 2p local
/// points is built (cross distances from cost, everything else 0).
QsimResult w1_pq_qsim_local(const Matrix<double>& cost, double dxy, const QsimConfig& config);

}  // namespace orc::qorc

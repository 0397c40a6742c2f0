#pragma once

// Block encodings simulated as (operator, subnormalization, error) triples.
// A BlockEncoding with op A and subnorm s stands for a unitary whose
// |0>-block is A / s; err bounds || A_actual - A || in the units of op.
// Diagonal operators are stored as vectors and stay diagonal under every
// composition; the dense path exists for verification at small dimension.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace orc::qsim {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using Diagonal = std::vector<double>;

class Operator {
 public:
  Operator() = default;
  Operator(Diagonal diag) : rep_(std::move(diag)) {}  // NOLINT(google-explicit-constructor)
  Operator(DenseMatrix dense) : rep_(std::move(dense)) {}  // NOLINT

  static Operator identity(std::size_t dim) { return Operator(Diagonal(dim, 1.0)); }

  std::size_t dim() const noexcept;
  bool is_diagonal() const noexcept { return std::holds_alternative<Diagonal>(rep_); }
  const Diagonal& diagonal() const { return std::get<Diagonal>(rep_); }
  const DenseMatrix& dense_ref() const { return std::get<DenseMatrix>(rep_); }
  /// Materializes a dense copy (dim must be small enough to afford it).
  DenseMatrix dense() const;
  double norm() const;

 private:
  std::variant<Diagonal, DenseMatrix> rep_;
};

struct BlockEncoding {
  Operator op;
  double subnorm = 1.0;
  double err = 0.0;
  std::size_t ancilla_dim = 1;

  std::size_t dim() const noexcept { return op.dim(); }
  /// op / subnorm, for diagonal encodings.
  Diagonal encoded_diagonal() const;
  DenseMatrix encoded_dense() const;
};

struct StateVector {
  std::vector<Complex> amps;

  /// Throws BadFactorization when the vector is not unit norm (1e-12).
  explicit StateVector(std::vector<Complex> amplitudes);
  static StateVector basis(std::size_t dim, std::size_t index);
  /// Equal superposition over the listed (distinct) basis indices.
  static StateVector uniform(std::size_t dim, std::span<const std::size_t> indices);

  std::size_t dim() const noexcept { return amps.size(); }
};

/// Bijection on {0, ..., dim - 1}, read as the unitary |k> -> |map[k]>.
struct PermutationSpec {
  std::vector<std::size_t> map;

  explicit PermutationSpec(std::vector<std::size_t> mapping);
  /// Sends each given source to its target and fills the remaining basis
  /// states in ascending order.
  static PermutationSpec complete(std::size_t dim,
                                  std::span<const std::pair<std::size_t, std::size_t>> fixed);
  /// Exchanges the two tensor factors of C^a (x) C^b: |i>|j> -> |j>|i>.
  static PermutationSpec swap_factors(std::size_t a, std::size_t b);

  std::size_t dim() const noexcept { return map.size(); }
  PermutationSpec inverse() const;
  DenseMatrix dense() const;
};

enum class SpectralMode { Exact, Chebyshev };

struct SpectralOptions {
  SpectralMode mode = SpectralMode::Exact;
  std::size_t degree = 0;  // Chebyshev only; 0 selects the default rule
  double eps_target = 1e-8;
};

/// Exact encoding of m with the given subnormalization (SubnormTooSmall).
BlockEncoding be_wrap(Operator m, double subnorm, std::size_t ancilla_dim = 2);
BlockEncoding be_identity(std::size_t dim);
/// A permutation is a unitary and hence its own exact encoding.
BlockEncoding be_permutation(const PermutationSpec& perm);

BlockEncoding be_product(const BlockEncoding& b1, const BlockEncoding& b2);
BlockEncoding be_tensor(const BlockEncoding& b1, const BlockEncoding& b2);
/// Encodes sum_i signs[i] * A~_i / m.
BlockEncoding be_lcu(std::span<const BlockEncoding> bs, std::span<const int> signs);
BlockEncoding be_scale(const BlockEncoding& b, double factor);

/// U b U^dagger for a permutation U; equal to be_product(be_product(U, b), U^dagger)
/// but keeps diagonal operators diagonal.
BlockEncoding be_conjugate(const PermutationSpec& perm, const BlockEncoding& b);
/// Top-left principal block of size dim (the |0>-sector of an extra
/// register); subnorm and err carry over.
BlockEncoding be_leading_block(const BlockEncoding& b, std::size_t dim);

/// (A~)^c / 2 for a positive diagonal encoding whose nonzero spectrum lies
/// in [1/kappa_M, 1]. Exact zeros are treated as the kernel and kept at 0.
BlockEncoding be_power(const BlockEncoding& b, double c, double kappa_M,
                       const SpectralOptions& options = {});

/// A~^+ / kappa_A for a diagonal encoding with nonzero |spectrum| in
/// [1/kappa_A, 1]; zeros stay zero (pseudoinverse).
BlockEncoding be_invert(const BlockEncoding& b, double kappa_A, const SpectralOptions& options = {});

/// Tr_A |phi><phi| for phi in C^dim_a (x) C^dim_b (A is the leading factor).
BlockEncoding be_density(const StateVector& phi, std::size_t dim_a, std::size_t dim_b);

/// Explicit unitary of dimension 2 * dim with top-left block op / subnorm.
/// Requires err == 0 (InexactEncoding) and dim <= 64 (TooLarge).
DenseMatrix be_dilate(const BlockEncoding& b);

/// |0>|phi> pushed through the dilation of a diagonal encoding, without
/// materializing the unitary: first half is A~ phi, second the garbage.
StateVector dilated_action(const BlockEncoding& b, const StateVector& phi);

struct OverlapOptions {
  std::optional<std::uint64_t> shots;
  std::uint64_t seed = 0;
};

/// Re<a|b>, exactly or through a Hadamard-test emulation with the given
/// number of shots.
double overlap(const StateVector& a, const StateVector& b, const OverlapOptions& options = {});

/// Standard error of the shot-noise estimate of an overlap with value v.
double overlap_standard_error(double v, std::uint64_t shots);

}  // namespace orc::qsim

namespace orc::qsim {

/// Switches a dense encoding whose off-diagonal entries vanish (within tol)
/// to the diagonal representation. Throws NotDiagonal otherwise.
BlockEncoding be_as_diagonal(const BlockEncoding& b, double tol = 1e-12);

}  // namespace orc::qsim

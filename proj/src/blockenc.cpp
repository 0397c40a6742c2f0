#include "orc/blockenc.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "orc/chebyshev.hpp"
#include "orc/error.hpp"
#include "orc/kernels/kernels.hpp"

namespace orc::qsim {

namespace {

constexpr double kRelTol = 1e-12;

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) raise(ErrorKind::DimMismatch, std::to_string(a) + " vs " + std::to_string(b));
}

}  // namespace

std::size_t Operator::dim() const noexcept {
  if (const auto* d = std::get_if<Diagonal>(&rep_)) return d->size();
  return static_cast<std::size_t>(std::get<DenseMatrix>(rep_).rows());
}

DenseMatrix Operator::dense() const {
  if (const auto* d = std::get_if<Diagonal>(&rep_)) {
    DenseMatrix m = DenseMatrix::Zero(static_cast<Eigen::Index>(d->size()),
                                      static_cast<Eigen::Index>(d->size()));
    for (std::size_t k = 0; k < d->size(); ++k) {
      m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = (*d)[k];
    }
    return m;
  }
  return std::get<DenseMatrix>(rep_);
}

double Operator::norm() const {
  if (const auto* d = std::get_if<Diagonal>(&rep_)) return kernels::max_abs(*d);
  const auto& m = std::get<DenseMatrix>(rep_);
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<DenseMatrix> svd(m);
  return svd.singularValues()(0);
}

Diagonal BlockEncoding::encoded_diagonal() const {
  const Diagonal& d = op.diagonal();
  Diagonal out(d.size());
  kernels::scale(d, 1.0 / subnorm, out);
  return out;
}

DenseMatrix BlockEncoding::encoded_dense() const { return op.dense() / subnorm; }

// ---------------------------------------------------------------------------

StateVector::StateVector(std::vector<Complex> amplitudes) : amps(std::move(amplitudes)) {
  double norm2 = 0.0;
  for (const Complex& a : amps) norm2 += std::norm(a);
  if (amps.empty() || std::fabs(norm2 - 1.0) > 1e-12) {
    raise(ErrorKind::BadFactorization, "state is not unit norm (|phi|^2 = " +
                                           std::to_string(norm2) + ")");
  }
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) raise(ErrorKind::IndexOutOfRange, "basis index " + std::to_string(index));
  std::vector<Complex> amps(dim, 0.0);
  amps[index] = 1.0;
  return StateVector(std::move(amps));
}

StateVector StateVector::uniform(std::size_t dim, std::span<const std::size_t> indices) {
  if (indices.empty()) raise(ErrorKind::IndexOutOfRange, "empty superposition");
  std::vector<Complex> amps(dim, 0.0);
  const double a = 1.0 / std::sqrt(static_cast<double>(indices.size()));
  for (std::size_t k : indices) {
    if (k >= dim) raise(ErrorKind::IndexOutOfRange, "basis index " + std::to_string(k));
    if (amps[k] != Complex(0.0)) raise(ErrorKind::IndexOutOfRange, "repeated basis index");
    amps[k] = a;
  }
  return StateVector(std::move(amps));
}

// ---------------------------------------------------------------------------

PermutationSpec::PermutationSpec(std::vector<std::size_t> mapping) : map(std::move(mapping)) {
  std::vector<char> hit(map.size(), 0);
  for (std::size_t v : map) {
    if (v >= map.size() || hit[v]) raise(ErrorKind::IndexOutOfRange, "mapping is not a bijection");
    hit[v] = 1;
  }
}

PermutationSpec PermutationSpec::complete(
    std::size_t dim, std::span<const std::pair<std::size_t, std::size_t>> fixed) {
  std::vector<std::size_t> mapping(dim, dim);
  std::vector<char> target_used(dim, 0);
  for (auto [from, to] : fixed) {
    if (from >= dim || to >= dim || mapping[from] != dim || target_used[to]) {
      raise(ErrorKind::IndexOutOfRange, "partial mapping is not injective");
    }
    mapping[from] = to;
    target_used[to] = 1;
  }
  std::size_t next = 0;
  for (std::size_t k = 0; k < dim; ++k) {
    if (mapping[k] != dim) continue;
    while (target_used[next]) ++next;
    mapping[k] = next;
    target_used[next] = 1;
  }
  return PermutationSpec(std::move(mapping));
}

PermutationSpec PermutationSpec::swap_factors(std::size_t a, std::size_t b) {
  std::vector<std::size_t> mapping(a * b);
  for (std::size_t i = 0; i < a; ++i) {
    for (std::size_t j = 0; j < b; ++j) mapping[i * b + j] = j * a + i;
  }
  return PermutationSpec(std::move(mapping));
}

PermutationSpec PermutationSpec::inverse() const {
  std::vector<std::size_t> inv(map.size());
  for (std::size_t k = 0; k < map.size(); ++k) inv[map[k]] = k;
  return PermutationSpec(std::move(inv));
}

DenseMatrix PermutationSpec::dense() const {
  const auto n = static_cast<Eigen::Index>(map.size());
  DenseMatrix m = DenseMatrix::Zero(n, n);
  for (std::size_t k = 0; k < map.size(); ++k) {
    m(static_cast<Eigen::Index>(map[k]), static_cast<Eigen::Index>(k)) = 1.0;
  }
  return m;
}

// ---------------------------------------------------------------------------

BlockEncoding be_wrap(Operator m, double subnorm, std::size_t ancilla_dim) {
  const double norm = m.norm();
  if (!(subnorm > 0.0) || subnorm < norm * (1.0 - kRelTol)) {
    raise(ErrorKind::SubnormTooSmall,
          "subnorm " + std::to_string(subnorm) + " < ||op|| = " + std::to_string(norm));
  }
  return BlockEncoding{std::move(m), subnorm, 0.0, std::max<std::size_t>(1, ancilla_dim)};
}

BlockEncoding be_identity(std::size_t dim) {
  return BlockEncoding{Operator::identity(dim), 1.0, 0.0, 1};
}

BlockEncoding be_permutation(const PermutationSpec& perm) {
  return BlockEncoding{Operator(perm.dense()), 1.0, 0.0, 1};
}

BlockEncoding be_product(const BlockEncoding& b1, const BlockEncoding& b2) {
  require_same_dim(b1.dim(), b2.dim());
  BlockEncoding out;
  if (b1.op.is_diagonal() && b2.op.is_diagonal()) {
    Diagonal d(b1.dim());
    kernels::mul(b1.op.diagonal(), b2.op.diagonal(), d);
    out.op = Operator(std::move(d));
  } else {
    out.op = Operator(DenseMatrix(b1.op.dense() * b2.op.dense()));
  }
  out.subnorm = b1.subnorm * b2.subnorm;
  out.err = b1.subnorm * b2.err + b2.subnorm * b1.err;
  out.ancilla_dim = b1.ancilla_dim * b2.ancilla_dim;
  return out;
}

BlockEncoding be_tensor(const BlockEncoding& b1, const BlockEncoding& b2) {
  BlockEncoding out;
  const std::size_t n1 = b1.dim(), n2 = b2.dim();
  if (b1.op.is_diagonal() && b2.op.is_diagonal()) {
    const Diagonal& a = b1.op.diagonal();
    const Diagonal& b = b2.op.diagonal();
    Diagonal d(n1 * n2);
    for (std::size_t i = 0; i < n1; ++i) {
      kernels::scale(b, a[i], std::span<double>(d.data() + i * n2, n2));
    }
    out.op = Operator(std::move(d));
  } else {
    const DenseMatrix a = b1.op.dense();
    const DenseMatrix b = b2.op.dense();
    DenseMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
      }
    }
    out.op = Operator(std::move(k));
  }
  out.subnorm = b1.subnorm * b2.subnorm;
  out.err = b1.subnorm * b2.err + b2.subnorm * b1.err;
  out.ancilla_dim = b1.ancilla_dim * b2.ancilla_dim;
  return out;
}

BlockEncoding be_lcu(std::span<const BlockEncoding> bs, std::span<const int> signs) {
  if (bs.empty() || bs.size() != signs.size()) {
    raise(ErrorKind::DimMismatch, "need one sign per encoding and at least one term");
  }
  for (int s : signs) {
    if (s != 1 && s != -1) raise(ErrorKind::ConfigError, "LCU signs must be +1 or -1");
  }
  const std::size_t dim = bs.front().dim();
  bool all_diagonal = true;
  bool common = true;
  for (const BlockEncoding& b : bs) {
    require_same_dim(dim, b.dim());
    all_diagonal = all_diagonal && b.op.is_diagonal();
    common = common && b.subnorm == bs.front().subnorm;
  }
  // Keep op in the inputs' units when they share one subnorm.
  const double unit = common ? bs.front().subnorm : 1.0;
  const double m = static_cast<double>(bs.size());

  BlockEncoding out;
  double err = 0.0;
  std::size_t ancilla = 1;
  if (all_diagonal) {
    Diagonal acc(dim, 0.0);
    for (std::size_t i = 0; i < bs.size(); ++i) {
      kernels::axpy(signs[i] * unit / bs[i].subnorm, bs[i].op.diagonal(), acc);
    }
    out.op = Operator(std::move(acc));
  } else {
    DenseMatrix acc = DenseMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < bs.size(); ++i) {
      acc += (signs[i] * unit / bs[i].subnorm) * bs[i].op.dense();
    }
    out.op = Operator(std::move(acc));
  }
  for (const BlockEncoding& b : bs) {
    err += b.err / b.subnorm;
    ancilla = std::max(ancilla, b.ancilla_dim);
  }
  std::size_t select = 1;
  while (select < bs.size()) select *= 2;
  out.subnorm = m * unit;
  out.err = unit * err;
  out.ancilla_dim = ancilla * select;
  return out;
}

BlockEncoding be_scale(const BlockEncoding& b, double factor) {
  if (!(factor > 1.0)) raise(ErrorKind::BadFactor, "factor must exceed 1, got " + std::to_string(factor));
  BlockEncoding out = b;
  out.subnorm *= factor;
  out.ancilla_dim *= 2;
  return out;
}

BlockEncoding be_conjugate(const PermutationSpec& perm, const BlockEncoding& b) {
  require_same_dim(perm.dim(), b.dim());
  BlockEncoding out = b;
  if (b.op.is_diagonal()) {
    const Diagonal& in = b.op.diagonal();
    Diagonal d(in.size());
    for (std::size_t k = 0; k < in.size(); ++k) d[perm.map[k]] = in[k];
    out.op = Operator(std::move(d));
  } else {
    const DenseMatrix& in = b.op.dense_ref();
    DenseMatrix m(in.rows(), in.cols());
    for (Eigen::Index i = 0; i < in.rows(); ++i) {
      for (Eigen::Index j = 0; j < in.cols(); ++j) {
        m(static_cast<Eigen::Index>(perm.map[static_cast<std::size_t>(i)]),
          static_cast<Eigen::Index>(perm.map[static_cast<std::size_t>(j)])) = in(i, j);
      }
    }
    out.op = Operator(std::move(m));
  }
  return out;
}

BlockEncoding be_leading_block(const BlockEncoding& b, std::size_t dim) {
  if (dim == 0 || dim > b.dim()) {
    raise(ErrorKind::IndexOutOfRange, "block of size " + std::to_string(dim) +
                                          " from dimension " + std::to_string(b.dim()));
  }
  BlockEncoding out = b;
  if (b.op.is_diagonal()) {
    const Diagonal& in = b.op.diagonal();
    out.op = Operator(Diagonal(in.begin(), in.begin() + static_cast<std::ptrdiff_t>(dim)));
  } else {
    const auto n = static_cast<Eigen::Index>(dim);
    out.op = Operator(DenseMatrix(b.op.dense_ref().topLeftCorner(n, n)));
  }
  return out;
}

namespace {

void check_support_spectrum(const Diagonal& encoded, double kappa, bool positive_only) {
  const double lower = (1.0 / kappa) * (1.0 - 1e-12);
  const double upper = 1.0 + 1e-12;
  for (double e : encoded) {
    if (e == 0.0) continue;
    if (positive_only && e < 0.0) {
      raise(ErrorKind::SpectrumOutOfRange, "negative eigenvalue " + std::to_string(e));
    }
    const double mag = std::fabs(e);
    if (mag < lower || mag > upper) {
      raise(ErrorKind::SpectrumOutOfRange, "eigenvalue " + std::to_string(e) +
                                               " outside [1/" + std::to_string(kappa) + ", 1]");
    }
  }
}

ChebyshevApprox fit_for(const std::function<double(double)>& f, double kappa,
                        const SpectralOptions& options) {
  const std::size_t degree = options.degree != 0
                                 ? options.degree
                                 : default_chebyshev_degree(kappa, options.eps_target);
  return chebyshev_fit(f, 1.0 / kappa, 1.0, degree);
}

// Evaluates the approximant on |e| over the support, clamped into its domain.
Diagonal apply_on_support(const ChebyshevApprox& approx, const Diagonal& encoded) {
  std::vector<std::size_t> support;
  std::vector<double> xs;
  for (std::size_t k = 0; k < encoded.size(); ++k) {
    if (encoded[k] == 0.0) continue;
    support.push_back(k);
    xs.push_back(std::clamp(std::fabs(encoded[k]), approx.lo, approx.hi));
  }
  std::vector<double> ys(xs.size());
  approx.evaluate(xs, ys);
  Diagonal out(encoded.size(), 0.0);
  for (std::size_t t = 0; t < support.size(); ++t) out[support[t]] = ys[t];
  return out;
}

}  // namespace

BlockEncoding be_power(const BlockEncoding& b, double c, double kappa_M,
                       const SpectralOptions& options) {
  if (!b.op.is_diagonal()) raise(ErrorKind::NotDiagonal, "fractional powers need a diagonal operator");
  if (!(c > 0.0 && c < 1.0)) raise(ErrorKind::ConfigError, "power exponent must lie in (0,1)");
  if (!(kappa_M >= 1.0)) raise(ErrorKind::ConfigError, "kappa_M must be >= 1");
  const Diagonal encoded = b.encoded_diagonal();
  check_support_spectrum(encoded, kappa_M, true);

  const double s = b.subnorm;
  const double s_c = std::pow(s, c);
  const double lipschitz = c * std::pow(kappa_M, 1.0 - c);
  BlockEncoding out;
  out.subnorm = 2.0 * s_c;
  out.ancilla_dim = b.ancilla_dim * 2;
  if (options.mode == SpectralMode::Exact) {
    Diagonal d(encoded.size(), 0.0);
    const Diagonal& op = b.op.diagonal();
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = op[k] == 0.0 ? 0.0 : std::pow(op[k], c);
    out.op = Operator(std::move(d));
    out.err = s_c * lipschitz * b.err / s;
  } else {
    const ChebyshevApprox approx =
        fit_for([c](double x) { return std::pow(x, c); }, kappa_M, options);
    Diagonal d = apply_on_support(approx, encoded);
    kernels::scale(d, s_c, d);
    out.op = Operator(std::move(d));
    out.err = s_c * (approx.err_bound + lipschitz * b.err / s);
  }
  return out;
}

BlockEncoding be_invert(const BlockEncoding& b, double kappa_A, const SpectralOptions& options) {
  if (!b.op.is_diagonal()) raise(ErrorKind::NotDiagonal, "inversion is simulated for diagonal operators");
  if (!(kappa_A >= 1.0)) raise(ErrorKind::ConfigError, "kappa_A must be >= 1");
  const Diagonal encoded = b.encoded_diagonal();
  check_support_spectrum(encoded, kappa_A, false);

  const double s = b.subnorm;
  BlockEncoding out;
  out.subnorm = kappa_A / s;
  out.ancilla_dim = b.ancilla_dim * 2;
  if (options.mode == SpectralMode::Exact) {
    const Diagonal& op = b.op.diagonal();
    Diagonal d(op.size(), 0.0);
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = op[k] == 0.0 ? 0.0 : 1.0 / op[k];
    out.op = Operator(std::move(d));
    out.err = out.subnorm * kappa_A * b.err / s;
  } else {
    const ChebyshevApprox approx =
        fit_for([kappa_A](double x) { return 1.0 / (kappa_A * x); }, kappa_A, options);
    Diagonal d = apply_on_support(approx, encoded);
    for (std::size_t k = 0; k < d.size(); ++k) {
      d[k] *= out.subnorm * (encoded[k] < 0.0 ? -1.0 : 1.0);
    }
    out.op = Operator(std::move(d));
    out.err = out.subnorm * (approx.err_bound + kappa_A * b.err / s);
  }
  return out;
}

BlockEncoding be_density(const StateVector& phi, std::size_t dim_a, std::size_t dim_b) {
  if (dim_a == 0 || dim_b == 0 || phi.dim() != dim_a * dim_b) {
    raise(ErrorKind::BadFactorization, "state of dimension " + std::to_string(phi.dim()) +
                                           " is not " + std::to_string(dim_a) + " x " +
                                           std::to_string(dim_b));
  }
  const auto nb = static_cast<Eigen::Index>(dim_b);
  Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> psi(
      phi.amps.data(), static_cast<Eigen::Index>(dim_a), nb);
  // rho_B = psi^T conj(psi): sum over the traced-out A index.
  DenseMatrix rho = psi.transpose() * psi.conjugate();
  return BlockEncoding{Operator(std::move(rho)), 1.0, 0.0, 2 * dim_a};
}

DenseMatrix be_dilate(const BlockEncoding& b) {
  if (b.err != 0.0) raise(ErrorKind::InexactEncoding, "dilation needs an exact encoding");
  if (b.dim() > 64) raise(ErrorKind::TooLarge, "dilation limited to dim <= 64");
  const DenseMatrix a = b.encoded_dense();
  const Eigen::Index n = a.rows();
  const DenseMatrix eye = DenseMatrix::Identity(n, n);
  auto defect = [&](const DenseMatrix& m) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(eye - m);
    Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return DenseMatrix(es.eigenvectors() * vals.cast<Complex>().asDiagonal() *
                       es.eigenvectors().adjoint());
  };
  DenseMatrix u(2 * n, 2 * n);
  u.topLeftCorner(n, n) = a;
  u.topRightCorner(n, n) = defect(a * a.adjoint());
  u.bottomLeftCorner(n, n) = defect(a.adjoint() * a);
  u.bottomRightCorner(n, n) = -a.adjoint();
  return u;
}

StateVector dilated_action(const BlockEncoding& b, const StateVector& phi) {
  if (!b.op.is_diagonal()) raise(ErrorKind::NotDiagonal, "use be_dilate for dense encodings");
  require_same_dim(b.dim(), phi.dim());
  const Diagonal e = b.encoded_diagonal();
  const std::size_t n = e.size();
  std::vector<Complex> out(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = std::clamp(e[k], -1.0, 1.0);
    out[k] = a * phi.amps[k];
    out[n + k] = std::sqrt(std::max(0.0, 1.0 - a * a)) * phi.amps[k];
  }
  // Unit norm up to rounding; renormalize to satisfy the StateVector check.
  double norm2 = 0.0;
  for (const Complex& z : out) norm2 += std::norm(z);
  const double inv = 1.0 / std::sqrt(norm2);
  for (Complex& z : out) z *= inv;
  return StateVector(std::move(out));
}

double overlap(const StateVector& a, const StateVector& b, const OverlapOptions& options) {
  require_same_dim(a.dim(), b.dim());
  Complex acc = 0.0;
  for (std::size_t k = 0; k < a.dim(); ++k) acc += std::conj(a.amps[k]) * b.amps[k];
  const double exact = acc.real();
  if (!options.shots) return exact;
  const std::uint64_t shots = *options.shots;
  if (shots == 0) raise(ErrorKind::ConfigError, "shots must be positive");
  const double success = std::clamp(0.5 * (1.0 + exact), 0.0, 1.0);
  std::mt19937_64 rng(options.seed);
  std::binomial_distribution<std::uint64_t> draw(shots, success);
  const std::uint64_t hits = draw(rng);
  return 2.0 * static_cast<double>(hits) / static_cast<double>(shots) - 1.0;
}

double overlap_standard_error(double v, std::uint64_t shots) {
  const double p = std::clamp(0.5 * (1.0 + v), 0.0, 1.0);
  return 2.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(shots));
}

BlockEncoding be_as_diagonal(const BlockEncoding& b, double tol) {
  if (b.op.is_diagonal()) return b;
  const DenseMatrix& m = b.op.dense_ref();
  Diagonal d(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i != j && std::abs(m(i, j)) > tol) raise(ErrorKind::NotDiagonal);
    }
    if (std::fabs(m(i, i).imag()) > tol) raise(ErrorKind::NotDiagonal, "complex diagonal entry");
    d[static_cast<std::size_t>(i)] = m(i, i).real();
  }
  BlockEncoding out = b;
  out.op = Operator(std::move(d));
  return out;
}

}  // namespace orc::qsim

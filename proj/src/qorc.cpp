#include "orc/qorc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "orc/error.hpp"
#include "orc/kernels/kernels.hpp"

namespace orc::qorc {

using qsim::BlockEncoding;
using qsim::Diagonal;

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t k) {
  return splitmix64(splitmix64(splitmix64(seed ^ a) ^ b) ^ k);
}

std::size_t checked_power(std::size_t p, std::size_t cap) {
  std::size_t dim = 1;
  for (std::size_t j = 0; j < p; ++j) {
    if (dim > cap / p) raise(ErrorKind::DimensionCap, std::to_string(p) + "^" + std::to_string(p) +
                                                          " exceeds cap " + std::to_string(cap));
    dim *= p;
  }
  if (dim > cap) raise(ErrorKind::DimensionCap, "dimension exceeds cap " + std::to_string(cap));
  return dim;
}

double factorial(std::size_t p) {
  double f = 1.0;
  for (std::size_t k = 2; k <= p; ++k) f *= static_cast<double>(k);
  return f;
}

void record(const QsimConfig& config, std::string stage, const BlockEncoding& be,
            std::optional<double> ledger_dev = std::nullopt,
            std::vector<std::pair<std::string, double>> extras = {}) {
  if (config.trace == nullptr) return;
  AuditRecord r;
  r.stage = std::move(stage);
  r.dim = be.dim();
  r.subnorm = be.subnorm;
  r.err = be.err;
  if (be.op.is_diagonal()) {
    const Diagonal enc = be.encoded_diagonal();
    if (!enc.empty()) {
      auto [lo, hi] = std::minmax_element(enc.begin(), enc.end());
      r.min_entry = *lo;
      r.max_entry = *hi;
    }
  }
  r.ledger_dev = ledger_dev;
  r.extras = std::move(extras);
  config.trace->push_back(std::move(r));
}

void record_scalar(const QsimConfig& config, std::string stage,
                   std::vector<std::pair<std::string, double>> extras) {
  if (config.trace == nullptr) return;
  AuditRecord r;
  r.stage = std::move(stage);
  r.extras = std::move(extras);
  config.trace->push_back(std::move(r));
}

void record_distance(const QsimConfig& config, const DistanceEncoding& enc,
                     const graph::GeodesicMatrix<double>& dg) {
  if (config.trace == nullptr) return;
  double dev = 0.0;
  const Diagonal e = enc.be.encoded_diagonal();
  for (std::size_t i = 0; i < enc.n; ++i)
    for (std::size_t j = 0; j < enc.n; ++j)
      dev = std::max(dev, std::fabs(e[i * enc.n + j] * enc.meta.alpha_q - dg(i, j)));
  record(config, "distance_encoding", enc.be, dev,
         {{"alpha", enc.meta.alpha}, {"alpha_q", enc.meta.alpha_q}, {"kappa", enc.meta.kappa}});
}

}  // namespace

DistanceEncoding build_distance_encoding(const graph::GeodesicMatrix<double>& dg, double margin,
                                         const qsim::SpectralOptions& spectral) {
  if (!(margin >= 0.0)) raise(ErrorKind::ConfigError, "margin must be >= 0");
  if (!dg.all_finite()) raise(ErrorKind::InfiniteDistance, "graph is disconnected");
  const std::size_t n = dg.size();
  const double maxd = n == 0 ? 0.0 : dg.max_finite();
  if (!(maxd > 0.0)) raise(ErrorKind::DegenerateAllZero, "every geodesic distance is zero");

  Diagonal d4(n * n);
  double min4 = std::numeric_limits<double>::infinity();
  double max4 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double d = dg(i, j);
      if (d < 0.0) raise(ErrorKind::InvalidWeight, "negative distance");
      const double v = d * d * d * d;
      d4[i * n + j] = v;
      if (v > 0.0) {
        min4 = std::min(min4, v);
        max4 = std::max(max4, v);
      }
    }
  }
  DistanceEncoding enc;
  enc.n = n;
  enc.meta.alpha = std::pow((1.0 + margin) * maxd, 4);
  enc.meta.kappa = max4 / min4;
  const BlockEncoding fourth = qsim::be_wrap(Diagonal(std::move(d4)), enc.meta.alpha);
  enc.be = qsim::be_power(fourth, 0.25, enc.meta.alpha / min4, spectral);
  enc.meta.alpha_q = enc.be.subnorm;
  return enc;
}

double tree_overlap_sum(const DistanceEncoding& enc, std::size_t center,
                        std::span<const std::size_t> nbrs, const qsim::OverlapOptions& shots,
                        double* std_error) {
  const std::size_t n = enc.n;
  const std::size_t p = nbrs.size();
  if (p == 0) raise(ErrorKind::IndexOutOfRange, "empty neighbour list");
  if (center >= n) raise(ErrorKind::IndexOutOfRange, "center " + std::to_string(center));
  std::vector<std::size_t> idx(p);
  for (std::size_t k = 0; k < p; ++k) {
    if (nbrs[k] >= n) raise(ErrorKind::IndexOutOfRange, "neighbour " + std::to_string(nbrs[k]));
    idx[k] = center * n + nbrs[k];
  }
  const qsim::StateVector phi = qsim::StateVector::uniform(n * n, idx);
  const qsim::StateVector out = qsim::dilated_action(enc.be, phi);
  std::vector<qsim::Complex> ref(2 * n * n, 0.0);
  std::copy(phi.amps.begin(), phi.amps.end(), ref.begin());
  const double unit = qsim::overlap(qsim::StateVector(std::move(ref)), out, shots);
  // Unit-norm state carries 1/p; the reported overlap is normalised by 1/(p+1).
  const double to_scaled = static_cast<double>(p) / static_cast<double>(p + 1);
  if (std_error != nullptr) {
    *std_error = shots.shots ? qsim::overlap_standard_error(unit, *shots.shots) * to_scaled : 0.0;
  }
  return unit * to_scaled;
}

QsimResult w1_tree_qsim(const graph::Graph& g, const graph::GeodesicMatrix<double>& dg,
                        graph::Vertex x, graph::Vertex y, const QsimConfig& config,
                        const DistanceEncoding* prebuilt) {
  if (!graph::verify_tree(g)) raise(ErrorKind::NotATree);
  const auto nb = graph::neighborhood(g, dg, x, y, config.include_endpoints);
  std::optional<DistanceEncoding> own;
  if (prebuilt == nullptr) own = build_distance_encoding(dg, config.margin, config.spectral);
  const DistanceEncoding& enc = prebuilt != nullptr ? *prebuilt : *own;
  record_distance(config, enc, dg);

  const double alpha_q = enc.meta.alpha_q * config.debug_alpha_q_factor;
  const double p = static_cast<double>(nb.p());
  const double q = static_cast<double>(nb.q());

  auto opts = [&](std::uint64_t k) {
    qsim::OverlapOptions o;
    o.shots = config.shots;
    o.seed = derive_seed(config.seed, x, y, k);
    return o;
  };
  double se_x = 0.0, se_y = 0.0, se_xy = 0.0;
  const double ox = tree_overlap_sum(enc, x, nb.X, opts(0), &se_x);
  const double oy = tree_overlap_sum(enc, y, nb.Y, opts(1), &se_y);

  const std::size_t n = enc.n;
  const qsim::StateVector pair = qsim::StateVector::basis(n * n, x * n + y);
  std::vector<qsim::Complex> ref(2 * n * n, 0.0);
  ref[x * n + y] = 1.0;
  const auto o_xy_opts = opts(2);
  const double oxy = qsim::overlap(qsim::StateVector(std::move(ref)),
                                   qsim::dilated_action(enc.be, pair), o_xy_opts);
  if (config.shots) se_xy = qsim::overlap_standard_error(oxy, *config.shots);

  const double sum_x = ox * alpha_q * (p + 1.0);
  const double sum_y = oy * alpha_q * (q + 1.0);
  const double dxy = oxy * alpha_q;

  QsimResult r;
  r.p = nb.p();
  r.q = nb.q();
  r.meta = enc.meta;
  r.result.x = x;
  r.result.y = y;
  r.result.w1 = sum_x / p + dxy + sum_y / q;
  r.result.dxy = dxy;
  r.result.curvature = 1.0 - r.result.w1 / dxy;
  r.result.method = transport::Method::QsimTree;
  if (config.shots) {
    const double a = se_x * alpha_q * (p + 1.0) / p;
    const double b = se_y * alpha_q * (q + 1.0) / q;
    const double c = se_xy * alpha_q;
    r.std_error = std::sqrt(a * a + b * b + c * c);
  }

  double exact_x = 0.0, exact_y = 0.0;
  for (auto v : nb.X) exact_x += dg(x, v);
  for (auto v : nb.Y) exact_y += dg(y, v);
  record_scalar(config, "tree_overlap_x",
                {{"overlap_scaled", ox}, {"overlap_unit", ox * (p + 1.0) / p},
                 {"recovered_sum", sum_x}, {"exact_sum", exact_x}});
  record_scalar(config, "tree_overlap_y",
                {{"overlap_scaled", oy}, {"overlap_unit", oy * (q + 1.0) / q},
                 {"recovered_sum", sum_y}, {"exact_sum", exact_y}});
  record_scalar(config, "tree_overlap_xy", {{"overlap", oxy}, {"recovered_dxy", dxy}});
  return r;
}

// ---------------------------------------------------------------------------

BlockEncoding localize_DG(const DistanceEncoding& enc, std::span<const std::size_t> X,
                          std::span<const std::size_t> Y) {
  if (X.size() != Y.size() || X.empty()) {
    raise(ErrorKind::SizeMismatch, std::to_string(X.size()) + " vs " + std::to_string(Y.size()));
  }
  const std::size_t n = enc.n;
  const std::size_t p = X.size();
  std::vector<std::pair<std::size_t, std::size_t>> fixed;
  fixed.reserve(p * p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      if (X[i] >= n || Y[j] >= n) raise(ErrorKind::IndexOutOfRange, "vertex outside the grid");
      fixed.emplace_back(X[i] * n + Y[j], i * p + j);
    }
  }
  const auto relabel = qsim::PermutationSpec::complete(n * n, fixed);
  const BlockEncoding local = qsim::be_leading_block(qsim::be_conjugate(relabel, enc.be), p * p);
  return qsim::be_conjugate(qsim::PermutationSpec::swap_factors(p, p), local);
}

BlockEncoding extract_Di(const BlockEncoding& dg_local, std::size_t i) {
  const std::size_t dim = dg_local.dim();
  const auto p = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(dim))));
  if (p * p != dim) raise(ErrorKind::SizeMismatch, "local encoding is not p^2-dimensional");
  if (i < 1 || i > p) raise(ErrorKind::IndexOutOfRange, "column " + std::to_string(i));
  std::vector<std::size_t> map(dim);
  for (std::size_t k = 0; k < dim; ++k) map[k] = k;
  const std::size_t off = (i - 1) * p;
  for (std::size_t k = 0; k < p; ++k) std::swap(map[k], map[off + k]);
  const qsim::PermutationSpec ui(std::move(map));
  return qsim::be_leading_block(qsim::be_conjugate(ui, dg_local), p);
}

BlockEncoding build_DP(std::span<const BlockEncoding> ds, std::size_t cap) {
  const std::size_t p = ds.size();
  if (p == 0) raise(ErrorKind::SizeMismatch, "no column encodings");
  for (const auto& d : ds) {
    if (d.dim() != p) raise(ErrorKind::SizeMismatch, "column encoding of wrong dimension");
  }
  checked_power(p, cap);
  if (p == 1) return ds[0];
  std::vector<BlockEncoding> terms;
  terms.reserve(p);
  std::size_t before = 1;
  for (std::size_t j = 0; j < p; ++j) {
    std::size_t after = 1;
    for (std::size_t k = j + 1; k < p; ++k) after *= p;
    BlockEncoding t = qsim::be_tensor(qsim::be_identity(before), ds[j]);
    terms.push_back(qsim::be_tensor(t, qsim::be_identity(after)));
    before *= p;
  }
  const std::vector<int> signs(p, 1);
  return qsim::be_lcu(terms, signs);
}

std::size_t perm_index(std::span<const std::size_t> digits, std::size_t p) {
  if (digits.size() != p) raise(ErrorKind::DigitOutOfRange, "expected " + std::to_string(p) + " digits");
  std::size_t k = 0;
  for (std::size_t d : digits) {
    if (d < 1 || d > p) raise(ErrorKind::DigitOutOfRange, "digit " + std::to_string(d));
    k = k * p + (d - 1);
  }
  return k;
}

std::vector<std::size_t> perm_digits(std::size_t k, std::size_t p) {
  std::vector<std::size_t> digits(p);
  for (std::size_t j = p; j-- > 0;) {
    digits[j] = k % p + 1;
    k /= p;
  }
  return digits;
}

namespace {

bool distinct_digits(std::size_t k, std::size_t p) {
  std::uint64_t seen = 0;
  for (std::size_t j = 0; j < p; ++j) {
    const std::uint64_t bit = std::uint64_t{1} << (k % p);
    if (seen & bit) return false;
    seen |= bit;
    k /= p;
  }
  return true;
}

}  // namespace

BlockEncoding build_Pi(std::size_t p, PiRoute route, std::size_t cap) {
  if (p == 0) raise(ErrorKind::SizeMismatch, "p must be positive");
  const std::size_t dim = checked_power(p, cap);
  if (route == PiRoute::Direct) {
    Diagonal d(dim, 0.0);
    for (std::size_t k = 0; k < dim; ++k) d[k] = distinct_digits(k, p) ? 1.0 : 0.0;
    return qsim::be_wrap(std::move(d), factorial(p));
  }
  if (p > 4) raise(ErrorKind::DimensionCap, "purified projector limited to p <= 4");
  std::vector<std::size_t> copies;
  for (std::size_t k = 0; k < dim; ++k) {
    if (distinct_digits(k, p)) copies.push_back(k * dim + k);
  }
  const auto phi = qsim::StateVector::uniform(dim * dim, copies);
  return qsim::be_as_diagonal(qsim::be_density(phi, dim, dim));
}

EigenEstimate min_eigen_power(const BlockEncoding& be, double kappa_A, double eps,
                              std::uint64_t seed, std::size_t max_iter) {
  if (!(eps > 0.0) || max_iter == 0) raise(ErrorKind::ConfigError, "eps and max_iter must be positive");
  const BlockEncoding diag = qsim::be_as_diagonal(be);
  const BlockEncoding inv = qsim::be_invert(diag, kappa_A);
  const Diagonal full = inv.encoded_diagonal();

  std::vector<double> a;
  for (double v : full) {
    if (v != 0.0) a.push_back(v);
  }
  if (a.empty()) raise(ErrorKind::DegenerateAllZero, "operator has no nonzero eigenvalue");

  EigenEstimate est;
  const double top = *std::max_element(a.begin(), a.end());
  double second = 0.0;
  for (double v : a) {
    if (v < top * (1.0 - 1e-12)) second = std::max(second, v);
  }
  est.gap_proxy = second > 0.0 ? top / second : std::numeric_limits<double>::infinity();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<double> v(a.size());
  for (double& c : v) c = gauss(rng);
  double norm = std::sqrt(kernels::dot(v, v));
  if (norm == 0.0) raise(ErrorKind::ZeroOverlap, "start vector vanished");
  kernels::scale(v, 1.0 / norm, v);
  double in_top = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] >= top * (1.0 - 1e-12)) in_top += v[k] * v[k];
  }
  est.initial_overlap = std::min(1.0, std::sqrt(in_top));
  if (est.initial_overlap == 0.0) raise(ErrorKind::ZeroOverlap);

  std::vector<double> w(a.size());
  double prev_delta = std::numeric_limits<double>::infinity();
  double rq = 0.0;
  for (std::size_t t = 1; t <= max_iter; ++t) {
    kernels::mul(a, v, w);
    const double next = kernels::dot(v, w);
    double res2 = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double r = a[k] - next;
      res2 += v[k] * v[k] * r * r;
    }
    est.rq_history.push_back(next);
    est.iterations = t;
    bool done = std::sqrt(res2) <= 1e-12 * next;
    if (t > 1) {
      const double delta = std::fabs(next - rq);
      const double ratio = delta / prev_delta;
      const double tail = ratio < 1.0 ? delta * ratio / (1.0 - ratio)
                                      : std::numeric_limits<double>::infinity();
      done = done || delta == 0.0 || (delta < eps * next && tail < eps * next);
      prev_delta = delta;
    }
    rq = next;
    if (done) {
      est.converged = true;
      break;
    }
    norm = std::sqrt(kernels::dot(w, w));
    kernels::scale(w, 1.0 / norm, v);
  }
  est.value = 1.0 / (kappa_A * rq);
  return est;
}

// ---------------------------------------------------------------------------

namespace {

QsimResult run_pq(const DistanceEncoding& enc, const graph::GeodesicMatrix<double>& dg,
                  std::span<const std::size_t> X, std::span<const std::size_t> Y,
                  const Matrix<double>& cost, double dxy, const QsimConfig& config) {
  const std::size_t p = X.size();
  if (Y.size() != p) {
    raise(ErrorKind::NotSquare, "p = " + std::to_string(p) + ", q = " + std::to_string(Y.size()));
  }
  checked_power(p, config.cap);
  const double alpha_q = enc.meta.alpha_q;
  const double pf = factorial(p);
  const double pd = static_cast<double>(p);

  record_distance(config, enc, dg);

  const BlockEncoding local = localize_DG(enc, X, Y);
  {
    double dev = 0.0;
    const Diagonal e = local.encoded_diagonal();
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j)
        dev = std::max(dev, std::fabs(e[j * p + i] * alpha_q - cost(i, j)));
    record(config, "localize", local, dev);
  }

  std::vector<BlockEncoding> ds;
  ds.reserve(p);
  for (std::size_t i = 1; i <= p; ++i) {
    ds.push_back(extract_Di(local, i));
    double dev = 0.0;
    const Diagonal e = ds.back().encoded_diagonal();
    for (std::size_t r = 0; r < p; ++r) dev = std::max(dev, std::fabs(e[r] * alpha_q - cost(r, i - 1)));
    record(config, "extract_D" + std::to_string(i), ds.back(), dev);
  }

  const BlockEncoding dp = build_DP(ds, config.cap);
  const BlockEncoding pi = build_Pi(p, config.pi_route, config.cap);
  const BlockEncoding composite = qsim::be_product(pi, dp);
  {
    const Diagonal e_dp = dp.encoded_diagonal();
    const Diagonal e_pi = pi.encoded_diagonal();
    const Diagonal e_c = composite.encoded_diagonal();
    double dev_dp = 0.0, dev_pi = 0.0, dev_c = 0.0;
    for (std::size_t k = 0; k < e_dp.size(); ++k) {
      const auto digits = perm_digits(k, p);
      double sum = 0.0;
      for (std::size_t j = 0; j < p; ++j) sum += cost(digits[j] - 1, j);
      const double proj = distinct_digits(k, p) ? 1.0 : 0.0;
      dev_dp = std::max(dev_dp, std::fabs(e_dp[k] * pd * alpha_q - sum));
      dev_pi = std::max(dev_pi, std::fabs(e_pi[k] * pf - proj));
      dev_c = std::max(dev_c, std::fabs(e_c[k] * pf * pd * alpha_q - proj * sum));
    }
    record(config, "build_DP", dp, dev_dp);
    record(config, "build_Pi", pi, dev_pi);
    record(config, "composite", composite, dev_c);
  }

  QsimResult r;
  r.p = p;
  r.q = p;
  r.meta = enc.meta;
  r.result.dxy = dxy;
  r.result.method = transport::Method::QsimPq;

  // A zero permutation sum sits in the kernel and would be skipped by the
  // pseudoinverse, so it is detected up front.
  const Diagonal& dp_op = dp.op.diagonal();
  const Diagonal& pi_op = pi.op.diagonal();
  bool kernel_hit = false;
  for (std::size_t k = 0; k < dp_op.size() && !kernel_hit; ++k) {
    kernel_hit = pi_op[k] != 0.0 && dp_op[k] == 0.0;
  }
  if (kernel_hit) {
    EigenEstimate est;
    est.kernel_hit = true;
    est.converged = true;
    r.eigen = est;
    r.result.w1 = 0.0;
  } else {
    double min_pos = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j)
        if (cost(i, j) > 0.0) min_pos = std::min(min_pos, cost(i, j));
    const double kappa_A = pf * pd * alpha_q / min_pos;
    EigenEstimate est = min_eigen_power(composite, kappa_A, config.eps, config.seed, config.max_iter);
    record_scalar(config, "min_eigen_power",
                  {{"kappa_A", kappa_A}, {"value", est.value},
                   {"iterations", static_cast<double>(est.iterations)},
                   {"initial_overlap", est.initial_overlap}, {"gap_proxy", est.gap_proxy},
                   {"converged", est.converged ? 1.0 : 0.0}});
    if (!est.converged) {
      raise(ErrorKind::NoConvergence,
            "best estimate " + to_string(est.value * pf * alpha_q) + " after " +
                std::to_string(est.iterations) + " iterations");
    }
    r.result.w1 = est.value * pf * alpha_q * config.debug_alpha_q_factor;
    r.eigen = std::move(est);
  }
  r.result.curvature = 1.0 - r.result.w1 / dxy;
  return r;
}

}  // namespace

QsimResult w1_pq_qsim(const graph::Graph& g, const graph::GeodesicMatrix<double>& dg,
                      graph::Vertex x, graph::Vertex y, const QsimConfig& config,
                      const DistanceEncoding* prebuilt) {
  const auto nb = graph::neighborhood(g, dg, x, y, config.include_endpoints);
  if (nb.p() != nb.q()) {
    raise(ErrorKind::NotSquare, "edge (" + std::to_string(x) + "," + std::to_string(y) +
                                    "): p = " + std::to_string(nb.p()) +
                                    ", q = " + std::to_string(nb.q()));
  }
  checked_power(nb.p(), config.cap);
  std::optional<DistanceEncoding> own;
  if (prebuilt == nullptr) own = build_distance_encoding(dg, config.margin, config.spectral);
  const DistanceEncoding& enc = prebuilt != nullptr ? *prebuilt : *own;
  QsimResult r = run_pq(enc, dg, nb.X, nb.Y, nb.cost, nb.dxy, config);
  r.result.x = x;
  r.result.y = y;
  return r;
}

QsimResult w1_pq_qsim_local(const Matrix<double>& cost, double dxy, const QsimConfig& config) {
  if (!cost.square()) {
    raise(ErrorKind::NotSquare, "p = " + std::to_string(cost.rows()) +
                                    ", q = " + std::to_string(cost.cols()));
  }
  const std::size_t p = cost.rows();
  checked_power(p, config.cap);
  graph::GeodesicMatrix<double> pseudo(2 * p);
  for (std::size_t i = 0; i < 2 * p; ++i)
    for (std::size_t j = 0; j < 2 * p; ++j) pseudo.set(i, j, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      pseudo.set(i, p + j, cost(i, j));
      pseudo.set(p + j, i, cost(i, j));
    }
  }
  std::vector<std::size_t> X(p), Y(p);
  for (std::size_t i = 0; i < p; ++i) {
    X[i] = i;
    Y[i] = p + i;
  }
  const DistanceEncoding enc = build_distance_encoding(pseudo, config.margin, config.spectral);
  return run_pq(enc, pseudo, X, Y, cost, dxy, config);
}

}  // namespace orc::qorc

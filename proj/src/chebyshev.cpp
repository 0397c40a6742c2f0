#include "orc/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "orc/error.hpp"
#include "orc/kernels/kernels.hpp"

namespace orc::qsim {

double ChebyshevApprox::operator()(double x) const {
  double out = 0.0;
  kernels::clenshaw(coeffs, lo, hi, std::span<const double>(&x, 1), std::span<double>(&out, 1));
  return out;
}

void ChebyshevApprox::evaluate(std::span<const double> x, std::span<double> out) const {
  kernels::clenshaw(coeffs, lo, hi, x, out);
}

namespace {

std::vector<double> interpolation_coeffs(const std::function<double(double)>& f, double lo,
                                         double hi, std::size_t terms) {
  const double pi = std::numbers::pi;
  std::vector<double> values(terms);
  for (std::size_t k = 0; k < terms; ++k) {
    const double t = std::cos(pi * (static_cast<double>(k) + 0.5) / static_cast<double>(terms));
    values[k] = f(0.5 * (hi - lo) * t + 0.5 * (hi + lo));
  }
  std::vector<double> a(terms, 0.0);
  for (std::size_t j = 0; j < terms; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < terms; ++k) {
      acc += values[k] * std::cos(pi * static_cast<double>(j) * (static_cast<double>(k) + 0.5) /
                                  static_cast<double>(terms));
    }
    a[j] = 2.0 * acc / static_cast<double>(terms);
  }
  a[0] *= 0.5;
  return a;
}

}  // namespace

ChebyshevApprox chebyshev_fit(const std::function<double(double)>& f, double lo, double hi,
                              std::size_t degree) {
  if (!(hi > lo)) raise(ErrorKind::SpectrumOutOfRange, "empty approximation interval");
  const std::size_t terms = std::max<std::size_t>(1024, 8 * (degree + 1));
  std::vector<double> full = interpolation_coeffs(f, lo, hi, terms);

  ChebyshevApprox approx;
  approx.lo = lo;
  approx.hi = hi;
  approx.coeffs.assign(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(std::min(terms, degree + 1)));

  double tail = 0.0;
  for (std::size_t j = degree + 1; j < terms; ++j) tail += std::fabs(full[j]);

  // Residual of the reference interpolant itself, sampled densely.
  ChebyshevApprox reference{lo, hi, full, 0.0};
  constexpr std::size_t kSamples = 4096;
  std::vector<double> xs(kSamples), ys(kSamples);
  for (std::size_t k = 0; k < kSamples; ++k) {
    xs[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(kSamples - 1);
  }
  reference.evaluate(xs, ys);
  double residual = 0.0;
  for (std::size_t k = 0; k < kSamples; ++k) residual = std::max(residual, std::fabs(ys[k] - f(xs[k])));

  double magnitude = 0.0;
  for (double c : approx.coeffs) magnitude += std::fabs(c);
  const double rounding = 8.0 * static_cast<double>(degree + 1) *
                          std::numeric_limits<double>::epsilon() * magnitude;
  approx.err_bound = tail + residual + rounding;
  return approx;
}

std::size_t default_chebyshev_degree(double kappa, double eps_target) {
  if (!(kappa >= 1.0) || !(eps_target > 0.0) || !(eps_target < 1.0)) {
    raise(ErrorKind::ConfigError, "need kappa >= 1 and eps_target in (0,1)");
  }
  const double d = std::ceil(std::sqrt(kappa) * std::log(1.0 / eps_target));
  return std::max<std::size_t>(1, static_cast<std::size_t>(d));
}

}  // namespace orc::qsim

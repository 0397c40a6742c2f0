#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace orc::qsim {

/// Truncated Chebyshev series of f on [lo, hi] with a certified-by-sampling
/// sup-norm error bound.
struct ChebyshevApprox {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> coeffs;  // degree + 1 terms
  double err_bound = 0.0;

  std::size_t degree() const noexcept { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  double operator()(double x) const;
  void evaluate(std::span<const double> x, std::span<double> out) const;
};

/// Fits a degree-d truncation of a high-order interpolant (at least 1024
/// terms). err_bound is the discarded coefficient tail plus the reference
/// interpolant's sampled residual and a rounding allowance.
ChebyshevApprox chebyshev_fit(const std::function<double(double)>& f, double lo, double hi,
                              std::size_t degree);

/// d = ceil(sqrt(kappa) * ln(1 / eps_target)), at least 1.
std::size_t default_chebyshev_degree(double kappa, double eps_target);

}  // namespace orc::qsim

#include <cmath>
#include <limits>

#include "orc/kernels/kernels.hpp"

namespace orc::kernels::scalar {
namespace {

void mul(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void scale(const double* a, double s, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = s * a[i];
}

void axpy(double s, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + s * x[i];
}

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void min_plus_row(const double* row_k, double d_ik, double* row_i,
                  std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    const double via = d_ik + row_k[j];
    if (via < row_i[j]) row_i[j] = via;
  }
}

void clenshaw(const double* coeffs, std::size_t ncoeff, double lo, double hi,
              const double* x, double* out, std::size_t n) {
  const double shift = lo + hi;
  const double inv_width = 1.0 / (hi - lo);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = (2.0 * x[i] - shift) * inv_width;
    const double two_t = 2.0 * t;
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t k = ncoeff; k-- > 1;) {
      const double b0 = coeffs[k] + two_t * b1 - b2;
      b2 = b1;
      b1 = b0;
    }
    out[i] = ncoeff == 0 ? 0.0 : coeffs[0] + t * b1 - b2;
  }
}

double min_positive(const double* a, std::size_t n) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] > 0.0 && a[i] < best) best = a[i];
  }
  return best;
}

double max_abs(const double* a, std::size_t n) {
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) best = std::fmax(best, std::fabs(a[i]));
  return best;
}

}  // namespace

const KernelTable kTable{mul, scale, axpy, dot, min_plus_row, clenshaw,
                         min_positive, max_abs};

}  // namespace orc::kernels::scalar

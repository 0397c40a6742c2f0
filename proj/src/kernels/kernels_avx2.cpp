// Compiled with -mavx2 only (no -mfma) so elementwise results are
// bit-identical to the scalar reference.
#include <immintrin.h>

#include <cmath>
#include <limits>

#include "orc/kernels/kernels.hpp"

namespace orc::kernels::avx2 {
namespace {

void mul(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i,
                     _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void scale(const double* a, double s, double* out, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(vs, _mm256_loadu_pd(a + i)));
  }
  for (; i < n; ++i) out[i] = s * a[i];
}

void axpy(double s, const double* x, double* y, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(vs, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] = y[i] + s * x[i];
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i),
                                             _mm256_loadu_pd(b + i)));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(a + i + 4),
                                             _mm256_loadu_pd(b + i + 4)));
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i),
                                             _mm256_loadu_pd(b + i)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  double acc = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void min_plus_row(const double* row_k, double d_ik, double* row_i,
                  std::size_t n) {
  const __m256d vd = _mm256_set1_pd(d_ik);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d via = _mm256_add_pd(vd, _mm256_loadu_pd(row_k + j));
    const __m256d cur = _mm256_loadu_pd(row_i + j);
    // Keep cur unless via is strictly smaller, matching the scalar branch.
    const __m256d less = _mm256_cmp_pd(via, cur, _CMP_LT_OQ);
    _mm256_storeu_pd(row_i + j, _mm256_blendv_pd(cur, via, less));
  }
  for (; j < n; ++j) {
    const double via = d_ik + row_k[j];
    if (via < row_i[j]) row_i[j] = via;
  }
}

void clenshaw(const double* coeffs, std::size_t ncoeff, double lo, double hi,
              const double* x, double* out, std::size_t n) {
  const double shift = lo + hi;
  const double inv_width = 1.0 / (hi - lo);
  const __m256d vshift = _mm256_set1_pd(shift);
  const __m256d vinv = _mm256_set1_pd(inv_width);
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t i = 0;
  if (ncoeff > 0) {
    for (; i + 4 <= n; i += 4) {
      const __m256d t = _mm256_mul_pd(
          _mm256_sub_pd(_mm256_mul_pd(two, _mm256_loadu_pd(x + i)), vshift), vinv);
      const __m256d two_t = _mm256_mul_pd(two, t);
      __m256d b1 = _mm256_setzero_pd();
      __m256d b2 = _mm256_setzero_pd();
      for (std::size_t k = ncoeff; k-- > 1;) {
        const __m256d b0 = _mm256_sub_pd(
            _mm256_add_pd(_mm256_set1_pd(coeffs[k]), _mm256_mul_pd(two_t, b1)), b2);
        b2 = b1;
        b1 = b0;
      }
      _mm256_storeu_pd(out + i,
                       _mm256_sub_pd(_mm256_add_pd(_mm256_set1_pd(coeffs[0]),
                                                   _mm256_mul_pd(t, b1)),
                                     b2));
    }
  }
  scalar::kTable.clenshaw(coeffs, ncoeff, lo, hi, x + i, out + i, n - i);
}

double min_positive(const double* a, std::size_t n) {
  const __m256d inf = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  const __m256d zero = _mm256_setzero_pd();
  __m256d best = inf;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(a + i);
    const __m256d pos = _mm256_cmp_pd(v, zero, _CMP_GT_OQ);
    best = _mm256_min_pd(best, _mm256_blendv_pd(inf, v, pos));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, best);
  double out = std::fmin(std::fmin(lanes[0], lanes[1]), std::fmin(lanes[2], lanes[3]));
  for (; i < n; ++i) {
    if (a[i] > 0.0 && a[i] < out) out = a[i];
  }
  return out;
}

double max_abs(const double* a, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d best = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    best = _mm256_max_pd(best, _mm256_andnot_pd(sign, _mm256_loadu_pd(a + i)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, best);
  double out = std::fmax(std::fmax(lanes[0], lanes[1]), std::fmax(lanes[2], lanes[3]));
  for (; i < n; ++i) out = std::fmax(out, std::fabs(a[i]));
  return out;
}

}  // namespace

const KernelTable kTable{mul, scale, axpy, dot, min_plus_row, clenshaw,
                         min_positive, max_abs};

}  // namespace orc::kernels::avx2

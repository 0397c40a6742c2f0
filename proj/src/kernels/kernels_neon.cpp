#include <arm_neon.h>

#include <cmath>
#include <limits>

#include "orc/kernels/kernels.hpp"

namespace orc::kernels::neon {
namespace {

void mul(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void scale(const double* a, double s, double* out, std::size_t n) {
  const float64x2_t vs = vdupq_n_f64(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmulq_f64(vs, vld1q_f64(a + i)));
  for (; i < n; ++i) out[i] = s * a[i];
}

void axpy(double s, const double* x, double* y, std::size_t n) {
  const float64x2_t vs = vdupq_n_f64(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    // separate mul + add (no vfmaq) to match the scalar rounding
    const float64x2_t prod = vmulq_f64(vs, vld1q_f64(x + i));
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), prod));
  }
  for (; i < n; ++i) y[i] = y[i] + s * x[i];
}

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  double out = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) out += a[i] * b[i];
  return out;
}

void min_plus_row(const double* row_k, double d_ik, double* row_i, std::size_t n) {
  const float64x2_t vd = vdupq_n_f64(d_ik);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const float64x2_t via = vaddq_f64(vd, vld1q_f64(row_k + j));
    const float64x2_t cur = vld1q_f64(row_i + j);
    vst1q_f64(row_i + j, vbslq_f64(vcltq_f64(via, cur), via, cur));
  }
  for (; j < n; ++j) {
    const double via = d_ik + row_k[j];
    if (via < row_i[j]) row_i[j] = via;
  }
}

void clenshaw(const double* coeffs, std::size_t ncoeff, double lo, double hi,
              const double* x, double* out, std::size_t n) {
  const float64x2_t vshift = vdupq_n_f64(lo + hi);
  const float64x2_t vinv = vdupq_n_f64(1.0 / (hi - lo));
  const float64x2_t two = vdupq_n_f64(2.0);
  std::size_t i = 0;
  if (ncoeff > 0) {
    for (; i + 2 <= n; i += 2) {
      const float64x2_t t =
          vmulq_f64(vsubq_f64(vmulq_f64(two, vld1q_f64(x + i)), vshift), vinv);
      const float64x2_t two_t = vmulq_f64(two, t);
      float64x2_t b1 = vdupq_n_f64(0.0), b2 = vdupq_n_f64(0.0);
      for (std::size_t k = ncoeff; k-- > 1;) {
        const float64x2_t b0 =
            vsubq_f64(vaddq_f64(vdupq_n_f64(coeffs[k]), vmulq_f64(two_t, b1)), b2);
        b2 = b1;
        b1 = b0;
      }
      vst1q_f64(out + i, vsubq_f64(vaddq_f64(vdupq_n_f64(coeffs[0]), vmulq_f64(t, b1)), b2));
    }
  }
  scalar::kTable.clenshaw(coeffs, ncoeff, lo, hi, x + i, out + i, n - i);
}

double min_positive(const double* a, std::size_t n) {
  return scalar::kTable.min_positive(a, n);
}

double max_abs(const double* a, std::size_t n) {
  float64x2_t best = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) best = vmaxq_f64(best, vabsq_f64(vld1q_f64(a + i)));
  double out = std::fmax(vgetq_lane_f64(best, 0), vgetq_lane_f64(best, 1));
  for (; i < n; ++i) out = std::fmax(out, std::fabs(a[i]));
  return out;
}

}  // namespace

const KernelTable kTable{mul, scale, axpy, dot, min_plus_row, clenshaw,
                         min_positive, max_abs};

}  // namespace orc::kernels::neon

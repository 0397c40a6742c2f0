#pragma once

// Data-parallel double-precision kernels behind the diagonal block-encoding
// path, the power iteration, Chebyshev evaluation and float-mode
// Floyd–Warshall. Every kernel has a scalar reference; SIMD variants are
// picked at runtime from what the CPU reports.

#include <cstddef>
#include <span>
#include <string_view>

namespace orc::kernels {

enum class Isa { Scalar, Avx2, Neon };

struct KernelTable {
  // out[i] = a[i] * b[i]
  void (*mul)(const double* a, const double* b, double* out, std::size_t n);
  // out[i] = s * a[i]
  void (*scale)(const double* a, double s, double* out, std::size_t n);
  // y[i] += s * x[i]
  void (*axpy)(double s, const double* x, double* y, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
  // row_i[j] = min(row_i[j], d_ik + row_k[j])
  void (*min_plus_row)(const double* row_k, double d_ik, double* row_i,
                       std::size_t n);
  // out[i] = sum_k coeffs[k] T_k(t_i), t_i = (2 x_i - (lo + hi)) / (hi - lo)
  void (*clenshaw)(const double* coeffs, std::size_t ncoeff, double lo,
                   double hi, const double* x, double* out, std::size_t n);
  // smallest a[i] > 0, or +inf when there is none
  double (*min_positive)(const double* a, std::size_t n);
  double (*max_abs)(const double* a, std::size_t n);
};

std::string_view isa_name(Isa isa) noexcept;
bool isa_supported(Isa isa) noexcept;

/// Table for a specific ISA; falls back to scalar if unsupported.
const KernelTable& table(Isa isa) noexcept;

/// Best supported ISA, unless ORC_ISA=scalar|avx2|neon overrides it.
Isa active_isa() noexcept;
void set_active_isa(Isa isa) noexcept;
const KernelTable& active() noexcept;

namespace scalar {
extern const KernelTable kTable;
}
#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
extern const KernelTable kTable;
}
#endif
#if defined(__aarch64__)
namespace neon {
extern const KernelTable kTable;
}
#endif

// Span conveniences over the active table.
void mul(std::span<const double> a, std::span<const double> b,
         std::span<double> out);
void scale(std::span<const double> a, double s, std::span<double> out);
void axpy(double s, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> a, std::span<const double> b);
void min_plus_row(std::span<const double> row_k, double d_ik,
                  std::span<double> row_i);
void clenshaw(std::span<const double> coeffs, double lo, double hi,
              std::span<const double> x, std::span<double> out);
double min_positive(std::span<const double> a);
double max_abs(std::span<const double> a);

}  // namespace orc::kernels

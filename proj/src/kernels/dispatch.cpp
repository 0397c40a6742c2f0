#include <atomic>
#include <cassert>
#include <cstdlib>
#include <string_view>

#include "orc/kernels/kernels.hpp"

namespace orc::kernels {
namespace {

Isa detect_best() noexcept {
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2")) return Isa::Avx2;
#endif
#if defined(__aarch64__)
  return Isa::Neon;
#endif
  return Isa::Scalar;
}

Isa initial_isa() noexcept {
  if (const char* env = std::getenv("ORC_ISA")) {
    const std::string_view v(env);
    if (v == "scalar") return Isa::Scalar;
    if (v == "avx2" && isa_supported(Isa::Avx2)) return Isa::Avx2;
    if (v == "neon" && isa_supported(Isa::Neon)) return Isa::Neon;
  }
  return detect_best();
}

std::atomic<Isa>& current() noexcept {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "scalar";
}

bool isa_supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) noexcept {
  if (!isa_supported(isa)) return scalar::kTable;
  switch (isa) {
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::Avx2: return avx2::kTable;
#endif
#if defined(__aarch64__)
    case Isa::Neon: return neon::kTable;
#endif
    default: return scalar::kTable;
  }
}

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) noexcept {
  current().store(isa_supported(isa) ? isa : Isa::Scalar, std::memory_order_relaxed);
}

const KernelTable& active() noexcept { return table(active_isa()); }

void mul(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  assert(a.size() == b.size() && a.size() == out.size());
  active().mul(a.data(), b.data(), out.data(), out.size());
}

void scale(std::span<const double> a, double s, std::span<double> out) {
  assert(a.size() == out.size());
  active().scale(a.data(), s, out.data(), out.size());
}

void axpy(double s, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  active().axpy(s, x.data(), y.data(), y.size());
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return active().dot(a.data(), b.data(), a.size());
}

void min_plus_row(std::span<const double> row_k, double d_ik, std::span<double> row_i) {
  assert(row_k.size() == row_i.size());
  active().min_plus_row(row_k.data(), d_ik, row_i.data(), row_i.size());
}

void clenshaw(std::span<const double> coeffs, double lo, double hi,
              std::span<const double> x, std::span<double> out) {
  assert(x.size() == out.size());
  active().clenshaw(coeffs.data(), coeffs.size(), lo, hi, x.data(), out.data(), out.size());
}

double min_positive(std::span<const double> a) {
  return active().min_positive(a.data(), a.size());
}

double max_abs(std::span<const double> a) { return active().max_abs(a.data(), a.size()); }

}  // namespace orc::kernels

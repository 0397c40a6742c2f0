#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include <gmpxx.h>

namespace orc {

/// Exact arithmetic for rational edge weights; all golden values are
/// compared with operator== in this mode.
using Rational = mpq_class;

template <typename T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

/// Parses "3", "-2.5", "1e-3", "7/4" exactly. Throws ParseError.
Rational parse_rational(std::string_view text);

double to_double(const Rational& r);
inline double to_double(double d) { return d; }

/// "num/den" (or "num" for integers) for rationals; shortest round-trip
/// decimal for doubles.
std::string to_string(const Rational& r);
std::string to_string(double d);

template <typename T>
T from_rational(const Rational& r) {
  if constexpr (is_exact_v<T>) {
    return r;
  } else {
    return r.get_d();
  }
}

template <typename T>
T abs_value(const T& v) {
  if constexpr (is_exact_v<T>) {
    return abs(v);
  } else {
    return v < 0 ? -v : v;
  }
}

/// Row-major dense matrix used for cost matrices and transport plans.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
    Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < m.rows_; ++i) {
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i].at(j);
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  const std::vector<T>& data() const noexcept { return data_; }

  template <typename U>
  Matrix<U> cast() const {
    Matrix<U> out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) {
        if constexpr (std::is_same_v<U, double>) {
          out(i, j) = to_double((*this)(i, j));
        } else {
          out(i, j) = U((*this)(i, j));
        }
      }
    }
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

}  // namespace orc

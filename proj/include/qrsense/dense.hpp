// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qrsense/errors.hpp"

namespace qrsense {

using cdouble = std::complex<double>;

enum class ColumnState { Raw, UnitColumns };

/// Dense row-major matrix. T is double or std::complex<double>.
///
/// The column-state flag records whether the columns have been scaled to unit
/// l2 norm; recovery and coherence routines require UnitColumns.
template <class T>
class DenseMatrix {
 public:
  using value_type = T;

  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, ColumnState state = ColumnState::Raw)
      : rows_(rows), cols_(cols), state_(state), data_(rows * cols, T{}) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  ColumnState state() const noexcept { return state_; }
  void set_state(ColumnState state) noexcept { state_ = state; }

  T& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<T> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

  std::vector<T> column(std::size_t c) const {
    std::vector<T> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  std::span<const T> data() const noexcept { return data_; }
  std::span<T> data() noexcept { return data_; }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n, ColumnState::UnitColumns);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  ColumnState state_ = ColumnState::Raw;
  std::vector<T> data_;
};

using ComplexMatrix = DenseMatrix<cdouble>;
using RealMatrix = DenseMatrix<double>;

inline double abs2(double x) noexcept { return x * x; }
inline double abs2(cdouble z) noexcept { return z.real() * z.real() + z.imag() * z.imag(); }
inline double conj_if_complex(double x) noexcept { return x; }
inline cdouble conj_if_complex(cdouble z) noexcept { return std::conj(z); }

template <class T>
std::vector<double> column_norms(const DenseMatrix<T>& m) {
  std::vector<double> sq(m.cols(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    for (std::size_t c = 0; c < m.cols(); ++c) sq[c] += abs2(row[c]);
  }
  for (double& s : sq) s = std::sqrt(s);
  return sq;
}

/// Scale every column to unit l2 norm. Throws InvalidArgument on a zero column.
template <class T>
DenseMatrix<T> column_normalize(DenseMatrix<T> m) {
  const std::vector<double> norms = column_norms(m);
  for (double n : norms) {
    if (!(n > 0.0)) throw InvalidArgument("column_normalize: zero column");
  }
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    for (std::size_t c = 0; c < m.cols(); ++c) row[c] /= norms[c];
  }
  m.set_state(ColumnState::UnitColumns);
  return m;
}

/// Columns selected by `support`, in support order.
template <class T>
DenseMatrix<T> select_columns(const DenseMatrix<T>& m, std::span<const std::size_t> support) {
  DenseMatrix<T> out(m.rows(), support.size(), m.state());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t j = 0; j < support.size(); ++j) out(r, j) = m(r, support[j]);
  }
  return out;
}

/// Phi * x.
template <class T>
std::vector<T> multiply(const DenseMatrix<T>& m, std::span<const T> x) {
  if (x.size() != m.cols()) throw InvalidArgument("multiply: dimension mismatch");
  std::vector<T> y(m.rows(), T{});
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    T acc{};
    for (std::size_t c = 0; c < m.cols(); ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
  return y;
}

template <class T>
double norm2(std::span<const T> v) {
  double s = 0.0;
  for (const T& x : v) s += abs2(x);
  return std::sqrt(s);
}

}  // namespace qrsense

// SPDX-License-Identifier: Apache-2.0
#include "qrsense/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "qrsense/kernels.hpp"

namespace qrsense {

namespace {

inline double inner(std::span<const double> a, std::span<const double> b) { return simd::dot(a, b); }
inline cdouble inner(std::span<const cdouble> a, std::span<const cdouble> b) { return simd::dotc(a, b); }

template <class T>
void require_unit_columns(const DenseMatrix<T>& m, const char* what) {
  if (m.state() != ColumnState::UnitColumns) {
    throw InvalidArgument(std::string(what) + ": dictionary must have unit-norm columns");
  }
}

// r = y - Q Q^H y, one modified Gram-Schmidt pass over the basis.
template <class T>
void residual_of(const IncrementalQR<T>& qr, std::span<const T> y, std::vector<T>& r) {
  r.assign(y.begin(), y.end());
  for (std::size_t j = 0; j < qr.size(); ++j) {
    const T h = inner(qr.q(j), std::span<const T>(r));
    simd::axpy(-h, qr.q(j), std::span<T>(r));
  }
}

}  // namespace

void RecoveryConfig::validate() const {
  if (max_iterations < 1) throw InvalidArgument("RecoveryConfig: max_iterations must be >= 1");
  if (residual_tolerance && !(*residual_tolerance >= 0.0)) {
    throw InvalidArgument("RecoveryConfig: residual_tolerance must be >= 0");
  }
}

template <class T>
void IncrementalQR<T>::append(std::span<const T> column) {
  if (column.size() != rows_) throw InvalidArgument("IncrementalQR::append: wrong column length");
  std::vector<T> v(column.begin(), column.end());
  std::vector<T> rcol(q_.size() + 1, T{});
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t j = 0; j < q_.size(); ++j) {
      const T h = inner(std::span<const T>(q_[j]), std::span<const T>(v));
      rcol[j] += h;
      simd::axpy(-h, std::span<const T>(q_[j]), std::span<T>(v));
    }
  }
  const double d = norm2(std::span<const T>(v));
  const double new_max = q_.empty() ? d : std::max(max_diag_, d);
  const double new_min = q_.empty() ? d : std::min(min_diag_, d);
  if (!(d > 0.0) || new_max / new_min > kMaxConditionEstimate) {
    throw RankDeficiency("column set is rank deficient (condition estimate above 1e12)");
  }
  for (T& x : v) x /= d;
  rcol.back() = d;
  q_.push_back(std::move(v));
  r_.push_back(std::move(rcol));
  max_diag_ = new_max;
  min_diag_ = new_min;
}

template <class T>
void IncrementalQR<T>::project_out_last(std::span<T> r) const {
  if (q_.empty()) return;
  const T h = inner(std::span<const T>(q_.back()), std::span<const T>(r.data(), r.size()));
  simd::axpy(-h, std::span<const T>(q_.back()), r);
}

template <class T>
std::vector<T> IncrementalQR<T>::solve(std::span<const T> y) const {
  if (y.size() != rows_) throw InvalidArgument("IncrementalQR::solve: wrong vector length");
  const std::size_t k = q_.size();
  std::vector<T> c(k);
  for (std::size_t j = 0; j < k; ++j) c[j] = inner(std::span<const T>(q_[j]), y);
  for (std::size_t j = k; j-- > 0;) {
    T acc = c[j];
    for (std::size_t i = j + 1; i < k; ++i) acc -= r_[i][j] * c[i];
    c[j] = acc / r_[j][j];
  }
  return c;
}

template <class T>
double IncrementalQR<T>::condition_estimate() const noexcept {
  return q_.empty() ? 1.0 : max_diag_ / min_diag_;
}

template <class T>
RecoveryResult<T> omp(const DenseMatrix<T>& dictionary, std::span<const T> y, const RecoveryConfig& config) {
  config.validate();
  require_unit_columns(dictionary, "omp");
  if (y.size() != dictionary.rows()) throw InvalidArgument("omp: measurement length does not match dictionary rows");

  const double y_norm = norm2(y);
  const double tolerance = config.residual_tolerance.value_or(1e-9 * y_norm);

  RecoveryResult<T> result;
  result.residual_trace.push_back(y_norm);
  result.residual_norm = y_norm;

  IncrementalQR<T> qr(dictionary.rows());
  std::vector<T> residual(y.begin(), y.end());
  std::vector<T> correlation(dictionary.cols());
  std::vector<bool> selected(dictionary.cols(), false);

  while (result.iterations < config.max_iterations && result.residual_norm > tolerance) {
    simd::adjoint_multiply(dictionary, residual, correlation);
    std::size_t best = dictionary.cols();
    double best_value = -1.0;
    for (std::size_t n = 0; n < correlation.size(); ++n) {
      if (selected[n]) continue;
      const double value = abs2(correlation[n]);
      if (value > best_value) {
        best_value = value;
        best = n;
      }
    }
    if (best == dictionary.cols()) break;

    const std::vector<T> column = dictionary.column(best);
    try {
      qr.append(column);
    } catch (const RankDeficiency& e) {
      result.coefficients = qr.solve(y);
      throw RankDeficientError<T>(std::string("omp: ") + e.what(), std::move(result));
    }
    selected[best] = true;
    result.support.push_back(best);
    residual_of(qr, y, residual);
    result.residual_norm = norm2(std::span<const T>(residual));
    result.residual_trace.push_back(result.residual_norm);
    ++result.iterations;
  }
  result.coefficients = qr.solve(y);
  return result;
}

template <class T>
LeastSquaresResult<T> least_squares(const DenseMatrix<T>& columns, std::span<const T> y) {
  if (y.size() != columns.rows()) throw InvalidArgument("least_squares: dimension mismatch");
  if (columns.rows() < columns.cols()) throw InvalidArgument("least_squares: more columns than rows");
  IncrementalQR<T> qr(columns.rows());
  for (std::size_t c = 0; c < columns.cols(); ++c) qr.append(std::span<const T>(columns.column(c)));
  LeastSquaresResult<T> out;
  out.coefficients = qr.solve(y);
  out.residual.assign(y.begin(), y.end());
  const std::vector<T> fitted = multiply(columns, std::span<const T>(out.coefficients));
  for (std::size_t i = 0; i < fitted.size(); ++i) out.residual[i] -= fitted[i];
  return out;
}

bool support_match(std::span<const std::size_t> estimated, std::span<const std::size_t> truth) {
  return std::set<std::size_t>(estimated.begin(), estimated.end()) == std::set<std::size_t>(truth.begin(), truth.end());
}

template <class T>
ExhaustiveResult<T> exhaustive_sparse_solve(const DenseMatrix<T>& dictionary, std::span<const T> y, std::size_t k) {
  const std::size_t n = dictionary.cols();
  if (y.size() != dictionary.rows()) throw InvalidArgument("exhaustive_sparse_solve: dimension mismatch");
  if (k < 1 || k > n || k > dictionary.rows()) throw InvalidArgument("exhaustive_sparse_solve: k out of range");
  double combinations = 1.0;
  for (std::size_t i = 0; i < k; ++i) combinations = combinations * static_cast<double>(n - i) / static_cast<double>(i + 1);
  if (combinations > kExhaustiveBudget) {
    throw InvalidArgument("exhaustive_sparse_solve: C(cols, k) exceeds the 1e6 budget");
  }

  ExhaustiveResult<T> best;
  best.residual_norm = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> support(k);
  std::iota(support.begin(), support.end(), std::size_t{0});
  while (true) {
    try {
      const DenseMatrix<T> sub = select_columns(dictionary, std::span<const std::size_t>(support));
      LeastSquaresResult<T> fit = least_squares(sub, y);
      const double r = norm2(std::span<const T>(fit.residual));
      if (r < best.residual_norm) {
        best.residual_norm = r;
        best.support = support;
        best.coefficients = std::move(fit.coefficients);
      }
    } catch (const RankDeficiency&) {
    }
    std::size_t i = k;
    while (i > 0 && support[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++support[i - 1];
    for (std::size_t j = i; j < k; ++j) support[j] = support[j - 1] + 1;
  }
  if (best.support.empty()) throw RankDeficiency("exhaustive_sparse_solve: every subset is rank deficient");
  return best;
}

template class IncrementalQR<double>;
template class IncrementalQR<cdouble>;

template RecoveryResult<double> omp(const RealMatrix&, std::span<const double>, const RecoveryConfig&);
template RecoveryResult<cdouble> omp(const ComplexMatrix&, std::span<const cdouble>, const RecoveryConfig&);
template LeastSquaresResult<double> least_squares(const RealMatrix&, std::span<const double>);
template LeastSquaresResult<cdouble> least_squares(const ComplexMatrix&, std::span<const cdouble>);
template ExhaustiveResult<double> exhaustive_sparse_solve(const RealMatrix&, std::span<const double>, std::size_t);
template ExhaustiveResult<cdouble> exhaustive_sparse_solve(const ComplexMatrix&, std::span<const cdouble>, std::size_t);

}  // namespace qrsense

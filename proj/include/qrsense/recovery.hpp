// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qrsense/dense.hpp"
#include "qrsense/errors.hpp"

namespace qrsense {

/// Condition-number limit above which a column set counts as rank deficient.
inline constexpr double kMaxConditionEstimate = 1e12;

enum class TieBreak { LowestIndex };

struct RecoveryConfig {
  std::size_t max_iterations = 1;
  /// Absolute l2 stopping threshold. Unset means 1e-9 * ||y||.
  std::optional<double> residual_tolerance;
  TieBreak tie_break = TieBreak::LowestIndex;

  void validate() const;
};

template <class T>
struct RecoveryResult {
  std::vector<std::size_t> support;    // selection order
  std::vector<T> coefficients;         // aligned with support, unit-column scale
  double residual_norm = 0.0;
  std::size_t iterations = 0;
  std::vector<double> residual_trace;  // ||r|| after each iteration, starting with ||y||
};

/// Thrown by omp() when the next selected column is numerically dependent on
/// the ones already chosen. partial() holds the result up to that point.
template <class T>
class RankDeficientError : public RankDeficiency {
 public:
  RankDeficientError(const std::string& what, RecoveryResult<T> partial)
      : RankDeficiency(what), partial_(std::move(partial)) {}
  const RecoveryResult<T>& partial() const noexcept { return partial_; }

 private:
  RecoveryResult<T> partial_;
};

/// Thin QR of a growing column set by modified Gram-Schmidt with one
/// reorthogonalization pass. Columns are appended one at a time.
template <class T>
class IncrementalQR {
 public:
  explicit IncrementalQR(std::size_t rows) : rows_(rows) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return q_.size(); }

  /// Append a column. Throws RankDeficiency (and leaves the factorization
  /// unchanged) if the condition estimate would exceed kMaxConditionEstimate.
  void append(std::span<const T> column);

  /// Orthonormal basis vector j.
  std::span<const T> q(std::size_t j) const noexcept { return q_[j]; }

  /// r -= q_j q_j^H r for the most recent basis vector.
  void project_out_last(std::span<T> r) const;

  /// Coefficients c minimizing ||Q R c - y||.
  std::vector<T> solve(std::span<const T> y) const;

  /// max |R_jj| / min |R_jj|.
  double condition_estimate() const noexcept;

 private:
  std::size_t rows_;
  std::vector<std::vector<T>> q_;
  std::vector<std::vector<T>> r_;  // r_[j] is column j of R, length j+1
  double max_diag_ = 0.0;
  double min_diag_ = 0.0;
};

/// Orthogonal matching pursuit on a unit-column dictionary.
///
/// Each iteration picks the unselected column with the largest |<phi_n, r>|
/// (lowest index on ties), re-projects y on the selected columns and updates
/// the residual. Stops after max_iterations or once ||r|| <= tolerance.
/// Coefficients refer to the unit columns; callers rescale.
template <class T>
RecoveryResult<T> omp(const DenseMatrix<T>& dictionary, std::span<const T> y, const RecoveryConfig& config);

template <class T>
struct LeastSquaresResult {
  std::vector<T> coefficients;
  std::vector<T> residual;
};

/// Dense least squares via QR. Throws RankDeficiency when the columns are
/// dependent to within kMaxConditionEstimate, InvalidArgument when rows < cols.
template <class T>
LeastSquaresResult<T> least_squares(const DenseMatrix<T>& columns, std::span<const T> y);

/// Order-free equality of two index sets.
bool support_match(std::span<const std::size_t> estimated, std::span<const std::size_t> truth);

template <class T>
struct ExhaustiveResult {
  std::vector<std::size_t> support;  // ascending
  std::vector<T> coefficients;
  double residual_norm = 0.0;
};

/// Budget on C(cols, k) for exhaustive_sparse_solve.
inline constexpr double kExhaustiveBudget = 1e6;

/// Least squares over every k-subset of columns; returns the smallest residual,
/// ties to the lexicographically smallest support. Rank-deficient subsets are
/// skipped. Throws InvalidArgument when C(cols, k) exceeds the budget.
template <class T>
ExhaustiveResult<T> exhaustive_sparse_solve(const DenseMatrix<T>& dictionary, std::span<const T> y, std::size_t k);

}  // namespace qrsense

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "qrsense/dense.hpp"
#include "qrsense/params.hpp"
#include "qrsense/random.hpp"

namespace qrsense {

// Column and row indexes in this API are 0-based. The mathematical
// construction is 1-based (m, n = 1..); the shift happens in fourier_rows().

/// Rows of the N x N Fourier matrix F[m, n] = exp(j 2 pi m n / N), m, n = 1..N.
/// `row_indexes` are 1-based Fourier row numbers in 1..N. Raw state.
ComplexMatrix fourier_rows(std::uint64_t n, std::span<const std::uint64_t> row_indexes);

/// The deterministic M x N matrix A[m, n] = exp(j 2 pi p m^2 n / N), rows in
/// increasing-m order. Raw (unit-modulus entries).
ComplexMatrix build_sensing_matrix(const SensingParams& params);

/// M distinct rows of F_N drawn uniformly without replacement. Raw state.
ComplexMatrix random_partial_fourier(std::uint64_t n, std::uint64_t m, Philox4x32& rng);

/// Row numbers (1-based) that random_partial_fourier would select, in draw order.
std::vector<std::uint64_t> sample_rows(std::uint64_t n, std::uint64_t m, Philox4x32& rng);

/// <phi_a, phi_b> = sum phi_a * conj(phi_b). Requires unit columns and a != b.
/// For the deterministic matrix this is ((p(a-b)/N) j sqrt(N) - 1) / (2M).
cdouble column_inner_product(const ComplexMatrix& matrix, std::size_t a, std::size_t b);

/// Largest |<phi_a, phi_b>| over all column pairs. Requires unit columns.
double coherence_bruteforce(const ComplexMatrix& matrix);

/// sqrt(M+1) / (sqrt(2) M).
double coherence_closed_form(const SensingParams& params);

/// (1/mu + 1) / 2: OMP and basis pursuit recover every k-sparse vector with k below this.
double sparsity_guarantee(const SensingParams& params);

/// Phi_K^H Phi_K for the selected columns.
ComplexMatrix sub_gram(const ComplexMatrix& matrix, std::span<const std::size_t> support);

struct EigenPair {
  double min;
  double max;
};

/// Extreme eigenvalues of the sub-Gram matrix of `support`.
EigenPair sub_gram_extreme_eigs(const ComplexMatrix& matrix, std::span<const std::size_t> support);

/// Largest eigenvalue of Phi^H Phi.
double spectral_norm_squared(const ComplexMatrix& matrix);

struct EigenSweepRecord {
  std::size_t k = 0;
  std::size_t trials = 0;
  double mean_max_eig = 0.0;
  double mean_min_eig = 0.0;
  double extreme_max_eig = 0.0;
  double extreme_min_eig = 0.0;
};

/// Draw `trials` uniform k-subsets of columns and record mean and extreme
/// sub-Gram eigenvalues. Trial t draws its subset from streams.stream(k, t), so
/// the result does not depend on `threads`.
EigenSweepRecord rip_eigen_sweep(const ComplexMatrix& matrix, std::size_t k, std::size_t trials,
                                 const StreamFamily& streams, unsigned threads = 1);

/// Same statistics over every k-subset (small instances only).
EigenSweepRecord rip_eigen_exhaustive(const ComplexMatrix& matrix, std::size_t k);

/// Uniform k-subset of {0..n-1} by partial Fisher-Yates, in draw order.
std::vector<std::size_t> random_support(std::size_t n, std::size_t k, Philox4x32& rng);

/// Left-hand sides of the statistical RIP conditions
///   mu <= c delta / ln(N/eps)  and  (k/N) ||Phi||^2 <= c delta^2 / ln(N/eps).
/// The constant c is left to the caller.
struct RipBoundReport {
  double mu = 0.0;
  double spectral_norm_sq = 0.0;
  double delta = 0.0;
  double epsilon = 0.0;
  double coherence_term = 0.0;  // mu * ln(N/eps)
  double energy_term = 0.0;     // (k/N) * ||Phi||^2 * ln(N/eps)

  /// Smallest c satisfying both conditions.
  double implied_constant() const;
};

RipBoundReport rip_bound_report(const SensingParams& params, std::size_t k, double delta, double epsilon);

/// Matrix CSV: header `row,col,re,im`, 1-based indexes, 17 significant digits.
void write_matrix_csv(std::ostream& out, const ComplexMatrix& matrix);
ComplexMatrix read_matrix_csv(std::istream& in);

}  // namespace qrsense

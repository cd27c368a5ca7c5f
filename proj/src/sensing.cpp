// SPDX-License-Identifier: Apache-2.0
#include "qrsense/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <string>

#include "qrsense/csv.hpp"
#include "qrsense/eigen.hpp"
#include "qrsense/errors.hpp"
#include "qrsense/kernels.hpp"
#include "qrsense/numtheory.hpp"
#include "qrsense/parallel.hpp"

namespace qrsense {

namespace {

std::vector<cdouble> roots_of_unity(std::uint64_t n) {
  std::vector<cdouble> roots(n);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::uint64_t r = 0; r < n; ++r) {
    const double angle = step * static_cast<double>(r);
    roots[r] = {std::cos(angle), std::sin(angle)};
  }
  return roots;
}

void require_unit_columns(const ComplexMatrix& m, const char* what) {
  if (m.state() != ColumnState::UnitColumns) {
    throw InvalidArgument(std::string(what) + ": matrix must have unit-norm columns");
  }
}

std::vector<std::vector<cdouble>> gather_columns(const ComplexMatrix& m, std::span<const std::size_t> support) {
  std::vector<std::vector<cdouble>> cols;
  cols.reserve(support.size());
  for (std::size_t c : support) {
    if (c >= m.cols()) throw InvalidArgument("support index " + std::to_string(c) + " out of range");
    cols.push_back(m.column(c));
  }
  return cols;
}

ComplexMatrix gram_of(const std::vector<std::vector<cdouble>>& cols) {
  const std::size_t k = cols.size();
  ComplexMatrix g(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    g(i, i) = simd::dotc(cols[i], cols[i]).real();
    for (std::size_t j = i + 1; j < k; ++j) {
      g(i, j) = simd::dotc(cols[i], cols[j]);
      g(j, i) = std::conj(g(i, j));
    }
  }
  return g;
}

EigenSweepRecord summarize(std::size_t k, std::span<const EigenPair> pairs) {
  EigenSweepRecord rec;
  rec.k = k;
  rec.trials = pairs.size();
  rec.extreme_max_eig = -std::numeric_limits<double>::infinity();
  rec.extreme_min_eig = std::numeric_limits<double>::infinity();
  double sum_max = 0.0;
  double sum_min = 0.0;
  for (const EigenPair& e : pairs) {
    sum_max += e.max;
    sum_min += e.min;
    rec.extreme_max_eig = std::max(rec.extreme_max_eig, e.max);
    rec.extreme_min_eig = std::min(rec.extreme_min_eig, e.min);
  }
  rec.mean_max_eig = sum_max / static_cast<double>(pairs.size());
  rec.mean_min_eig = sum_min / static_cast<double>(pairs.size());
  return rec;
}

void check_sweep_k(const ComplexMatrix& m, std::size_t k) {
  require_unit_columns(m, "rip_eigen_sweep");
  if (k < 1 || k > m.rows() || k > m.cols()) {
    throw InvalidArgument("rip_eigen_sweep: k = " + std::to_string(k) + " outside 1.." + std::to_string(m.rows()));
  }
}

}  // namespace

ComplexMatrix fourier_rows(std::uint64_t n, std::span<const std::uint64_t> row_indexes) {
  if (n == 0) throw InvalidArgument("fourier_rows: N must be positive");
  const std::vector<cdouble> roots = roots_of_unity(n);
  ComplexMatrix out(row_indexes.size(), n);
  for (std::size_t i = 0; i < row_indexes.size(); ++i) {
    const std::uint64_t m = row_indexes[i];
    if (m < 1 || m > n) throw InvalidArgument("fourier_rows: row index out of 1..N");
    // Column j of storage is n = j + 1 of the 1-based construction.
    for (std::uint64_t j = 0; j < n; ++j) out(i, j) = roots[mul_mod(m % n, j + 1, n)];
  }
  return out;
}

ComplexMatrix build_sensing_matrix(const SensingParams& params) {
  // Row m of A is row (p m^2 mod N) of F_N; the residue 0 never occurs.
  const std::vector<std::uint64_t> rows = quadratic_residue_rows(params);
  return fourier_rows(params.N(), rows);
}

std::vector<std::size_t> random_support(std::size_t n, std::size_t k, Philox4x32& rng) {
  if (k > n) throw InvalidArgument("random_support: k exceeds population");
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(k);
  return pool;
}

std::vector<std::uint64_t> sample_rows(std::uint64_t n, std::uint64_t m, Philox4x32& rng) {
  if (m < 1 || m > n) throw InvalidArgument("random_partial_fourier: need 1 <= M <= N");
  const std::vector<std::size_t> picks = random_support(n, m, rng);
  std::vector<std::uint64_t> rows(picks.size());
  std::transform(picks.begin(), picks.end(), rows.begin(), [](std::size_t i) { return std::uint64_t{i} + 1; });
  return rows;
}

ComplexMatrix random_partial_fourier(std::uint64_t n, std::uint64_t m, Philox4x32& rng) {
  const std::vector<std::uint64_t> rows = sample_rows(n, m, rng);
  return fourier_rows(n, rows);
}

cdouble column_inner_product(const ComplexMatrix& matrix, std::size_t a, std::size_t b) {
  require_unit_columns(matrix, "column_inner_product");
  if (a == b) throw InvalidArgument("column_inner_product: identical columns; use the column norm");
  if (a >= matrix.cols() || b >= matrix.cols()) throw InvalidArgument("column_inner_product: index out of range");
  const std::vector<cdouble> ca = matrix.column(a);
  const std::vector<cdouble> cb = matrix.column(b);
  return simd::dotc(cb, ca);
}

double coherence_bruteforce(const ComplexMatrix& matrix) {
  require_unit_columns(matrix, "coherence_bruteforce");
  if (matrix.cols() < 2) throw InvalidArgument("coherence_bruteforce: need at least two columns");
  std::vector<std::size_t> all(matrix.cols());
  std::iota(all.begin(), all.end(), std::size_t{0});
  const auto cols = gather_columns(matrix, all);
  double best = 0.0;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    for (std::size_t j = i + 1; j < cols.size(); ++j) best = std::max(best, std::abs(simd::dotc(cols[i], cols[j])));
  }
  return best;
}

double coherence_closed_form(const SensingParams& params) {
  const double m = static_cast<double>(params.M());
  return std::sqrt(m + 1.0) / (std::numbers::sqrt2 * m);
}

double sparsity_guarantee(const SensingParams& params) { return 0.5 * (1.0 / coherence_closed_form(params) + 1.0); }

ComplexMatrix sub_gram(const ComplexMatrix& matrix, std::span<const std::size_t> support) {
  return gram_of(gather_columns(matrix, support));
}

EigenPair sub_gram_extreme_eigs(const ComplexMatrix& matrix, std::span<const std::size_t> support) {
  require_unit_columns(matrix, "sub_gram_extreme_eigs");
  if (support.empty()) throw InvalidArgument("sub_gram_extreme_eigs: empty support");
  const std::vector<double> values = hermitian_eigenvalues(sub_gram(matrix, support));
  return {values.front(), values.back()};
}

double spectral_norm_squared(const ComplexMatrix& matrix) {
  if (matrix.rows() == 0 || matrix.cols() == 0) return 0.0;
  // Phi Phi^H and Phi^H Phi share their nonzero spectrum; use the smaller one.
  const bool by_rows = matrix.rows() <= matrix.cols();
  const std::size_t dim = by_rows ? matrix.rows() : matrix.cols();
  std::vector<std::vector<cdouble>> vecs(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    if (by_rows) {
      // conj of each row so that dotc(conj_row_a, conj_row_b) = (Phi Phi^H)[a,b]
      const auto row = matrix.row(i);
      vecs[i].resize(row.size());
      std::transform(row.begin(), row.end(), vecs[i].begin(), [](cdouble z) { return std::conj(z); });
    } else {
      vecs[i] = matrix.column(i);
    }
  }
  return hermitian_eigenvalues(gram_of(vecs)).back();
}

EigenSweepRecord rip_eigen_sweep(const ComplexMatrix& matrix, std::size_t k, std::size_t trials,
                                 const StreamFamily& streams, unsigned threads) {
  check_sweep_k(matrix, k);
  if (trials < 1) throw InvalidArgument("rip_eigen_sweep: trials must be >= 1");
  std::vector<EigenPair> results(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    Philox4x32 rng = streams.stream(static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(t));
    const std::vector<std::size_t> support = random_support(matrix.cols(), k, rng);
    results[t] = sub_gram_extreme_eigs(matrix, support);
  });
  return summarize(k, results);
}

EigenSweepRecord rip_eigen_exhaustive(const ComplexMatrix& matrix, std::size_t k) {
  check_sweep_k(matrix, k);
  const std::size_t n = matrix.cols();
  std::vector<std::size_t> support(k);
  std::iota(support.begin(), support.end(), std::size_t{0});
  std::vector<EigenPair> results;
  while (true) {
    results.push_back(sub_gram_extreme_eigs(matrix, support));
    // next combination in lexicographic order
    std::size_t i = k;
    while (i > 0 && support[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++support[i - 1];
    for (std::size_t j = i; j < k; ++j) support[j] = support[j - 1] + 1;
  }
  return summarize(k, results);
}

double RipBoundReport::implied_constant() const {
  return std::max(coherence_term / delta, energy_term / (delta * delta));
}

RipBoundReport rip_bound_report(const SensingParams& params, std::size_t k, double delta, double epsilon) {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("rip_bound_report: delta must lie in (0, 1)");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("rip_bound_report: epsilon must lie in (0, 1)");
  const double n = static_cast<double>(params.N());
  if (k < 1 || k > params.N()) throw InvalidArgument("rip_bound_report: k must lie in 1..N");

  RipBoundReport report;
  report.mu = coherence_closed_form(params);
  report.spectral_norm_sq = spectral_norm_squared(column_normalize(build_sensing_matrix(params)));
  report.delta = delta;
  report.epsilon = epsilon;
  const double log_term = std::log(n / epsilon);
  report.coherence_term = report.mu * log_term;
  report.energy_term = static_cast<double>(k) / n * report.spectral_norm_sq * log_term;
  return report;
}

void write_matrix_csv(std::ostream& out, const ComplexMatrix& matrix) {
  out << "row,col,re,im\n";
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    for (std::size_t c = 0; c < matrix.cols(); ++c) {
      const cdouble z = matrix(r, c);
      out << r + 1 << ',' << c + 1 << ',' << csv::format(z.real()) << ',' << csv::format(z.imag()) << '\n';
    }
  }
  if (!out) throw IoError("write_matrix_csv: stream write failed");
}

ComplexMatrix read_matrix_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || csv::split(line) != std::vector<std::string_view>{"row", "col", "re", "im"}) {
    throw IoError("read_matrix_csv: missing header row,col,re,im");
  }
  struct Entry {
    std::size_t r, c;
    cdouble z;
  };
  std::vector<Entry> entries;
  std::size_t rows = 0;
  std::size_t cols = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    const auto fields = csv::split(line);
    if (fields.size() != 4) throw IoError("read_matrix_csv: expected 4 fields");
    const long long r = csv::parse_integer(fields[0]);
    const long long c = csv::parse_integer(fields[1]);
    if (r < 1 || c < 1) throw IoError("read_matrix_csv: indexes are 1-based");
    entries.push_back({static_cast<std::size_t>(r - 1), static_cast<std::size_t>(c - 1),
                       {csv::parse_double(fields[2]), csv::parse_double(fields[3])}});
    rows = std::max(rows, static_cast<std::size_t>(r));
    cols = std::max(cols, static_cast<std::size_t>(c));
  }
  if (entries.size() != rows * cols) throw IoError("read_matrix_csv: incomplete matrix");
  ComplexMatrix m(rows, cols);
  for (const Entry& e : entries) m(e.r, e.c) = e.z;
  return m;
}

}  // namespace qrsense

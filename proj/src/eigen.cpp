// SPDX-License-Identifier: Apache-2.0
#include "qrsense/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qrsense/errors.hpp"

namespace qrsense {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagonalTolerance = 1e-12;
constexpr double kHermitianTolerance = 1e-10;

void check_hermitian(const ComplexMatrix& g) {
  if (g.rows() != g.cols()) throw InvalidArgument("hermitian_eigen: matrix is not square");
  double scale = 0.0;
  for (const cdouble& z : g.data()) scale = std::max(scale, std::abs(z));
  const double tol = kHermitianTolerance * std::max(scale, 1.0);
  for (std::size_t i = 0; i < g.rows(); ++i) {
    for (std::size_t j = i; j < g.cols(); ++j) {
      if (std::abs(g(i, j) - std::conj(g(j, i))) > tol) {
        throw InvalidArgument("hermitian_eigen: matrix is not Hermitian");
      }
    }
  }
}

double off_diagonal_mass(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (i != j) s += abs2(a(i, j));
    }
  }
  return std::sqrt(s);
}

// Zero a(p,q) by a diagonal phase change followed by a real plane rotation,
// accumulating the same unitary into v.
void rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
  const std::size_t n = a.rows();
  const double magnitude = std::abs(a(p, q));
  if (magnitude == 0.0) return;

  // D = diag(..., e^{-i phi} at q, ...) makes a(p,q) real and positive.
  const cdouble phase = std::conj(a(p, q)) / magnitude;
  for (std::size_t k = 0; k < n; ++k) a(k, q) *= phase;
  for (std::size_t k = 0; k < n; ++k) a(q, k) *= std::conj(phase);
  for (std::size_t k = 0; k < n; ++k) v(k, q) *= phase;

  const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * magnitude);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  for (std::size_t k = 0; k < n; ++k) {
    const cdouble akp = a(k, p);
    const cdouble akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const cdouble apk = a(p, k);
    const cdouble aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const cdouble vkp = v(k, p);
    const cdouble vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
}

}  // namespace

HermitianEigen hermitian_eigen(const ComplexMatrix& gram) {
  check_hermitian(gram);
  const std::size_t n = gram.rows();
  ComplexMatrix a = gram;
  ComplexMatrix v = ComplexMatrix::identity(n);

  double frobenius = 0.0;
  for (const cdouble& z : a.data()) frobenius += abs2(z);
  frobenius = std::sqrt(frobenius);
  const double target = kOffDiagonalTolerance * frobenius;

  int sweep = 0;
  while (off_diagonal_mass(a) > target) {
    if (++sweep > kMaxSweeps) throw ConvergenceError("hermitian_eigen: no convergence after 100 sweeps");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q);
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  HermitianEigen out;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n, n, ColumnState::UnitColumns);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]).real();
    for (std::size_t k = 0; k < n; ++k) out.vectors(k, j) = v(k, order[j]);
  }
  return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& gram) { return hermitian_eigen(gram).values; }

}  // namespace qrsense

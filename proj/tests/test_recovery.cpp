// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <set>
#include <vector>

#include "qrsense/errors.hpp"
#include "qrsense/recovery.hpp"
#include "qrsense/sensing.hpp"

using namespace qrsense;
using Catch::Matchers::WithinAbs;

namespace {

const ComplexMatrix& a103() {
  static const ComplexMatrix a = column_normalize(build_sensing_matrix(SensingParams::make(103, 1)));
  return a;
}

const ComplexMatrix& a23() {
  static const ComplexMatrix a = column_normalize(build_sensing_matrix(SensingParams::make(23, 1)));
  return a;
}

struct Instance {
  std::vector<std::size_t> support;
  std::vector<cdouble> values;
  std::vector<cdouble> y;
};

Instance planted(const ComplexMatrix& phi, std::size_t k, Philox4x32& g) {
  std::normal_distribution<double> d;
  Instance in;
  in.support = random_support(phi.cols(), k, g);
  std::vector<cdouble> x(phi.cols());
  for (std::size_t i : in.support) {
    in.values.push_back({d(g), 0.0});
    x[i] = in.values.back();
  }
  in.y = multiply(phi, std::span<const cdouble>(x));
  return in;
}

RecoveryConfig iterations(std::size_t k) {
  RecoveryConfig c;
  c.max_iterations = k;
  return c;
}

}  // namespace

TEST_CASE("RecoveryConfig validation") {
  RecoveryConfig c;
  c.max_iterations = 0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c.max_iterations = 1;
  c.residual_tolerance = -1.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c.residual_tolerance = 0.0;
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("omp on a single atom") {
  const ComplexMatrix& a = a103();
  const std::vector<cdouble> y = a.column(3);
  const RecoveryResult<cdouble> r = omp(a, std::span<const cdouble>(y), iterations(1));
  REQUIRE(r.support == std::vector<std::size_t>{3});
  CHECK_THAT(r.coefficients[0].real(), WithinAbs(1.0, 1e-12));
  CHECK_THAT(r.coefficients[0].imag(), WithinAbs(0.0, 1e-12));
  CHECK(r.residual_norm <= 1e-12);
  CHECK(r.iterations == 1);
  REQUIRE(r.residual_trace.size() == 2);
  CHECK_THAT(r.residual_trace[0], WithinAbs(1.0, 1e-12));
}

TEST_CASE("omp input checks") {
  const ComplexMatrix& a = a23();
  std::vector<cdouble> wrong(5);
  CHECK_THROWS_AS(omp(a, std::span<const cdouble>(wrong), iterations(1)), InvalidArgument);
  const ComplexMatrix raw = build_sensing_matrix(SensingParams::make(23, 1));
  const std::vector<cdouble> y(11, cdouble{1.0, 0.0});
  CHECK_THROWS_AS(omp(raw, std::span<const cdouble>(y), iterations(1)), InvalidArgument);
}

TEST_CASE("omp stops on a zero measurement") {
  const std::vector<cdouble> y(51);
  const RecoveryResult<cdouble> r = omp(a103(), std::span<const cdouble>(y), iterations(5));
  CHECK(r.support.empty());
  CHECK(r.iterations == 0);
  CHECK(r.residual_norm == 0.0);
}

TEST_CASE("omp recovers 3-sparse vectors on A(103)") {
  Philox4x32 g(31, 0, 0, 0);
  for (int t = 0; t < 200; ++t) {
    const Instance in = planted(a103(), 3, g);
    const RecoveryResult<cdouble> r = omp(a103(), std::span<const cdouble>(in.y), iterations(3));
    REQUIRE(support_match(r.support, in.support));
    for (std::size_t i = 0; i < r.support.size(); ++i) {
      const auto pos = std::find(in.support.begin(), in.support.end(), r.support[i]) - in.support.begin();
      REQUIRE(std::abs(r.coefficients[i] - in.values[static_cast<std::size_t>(pos)]) <= 1e-8);
    }
  }
}

TEST_CASE("omp invariants: distinct support, orthogonal residual, monotone trace") {
  Philox4x32 g(32, 0, 0, 0);
  const ComplexMatrix& a = a103();
  for (int t = 0; t < 100; ++t) {
    const Instance in = planted(a, 15, g);
    RecoveryConfig c = iterations(15);
    c.residual_tolerance = 0.0;
    const RecoveryResult<cdouble> r = omp(a, std::span<const cdouble>(in.y), c);
    REQUIRE(std::set<std::size_t>(r.support.begin(), r.support.end()).size() == r.support.size());
    for (std::size_t i = 1; i < r.residual_trace.size(); ++i) {
      REQUIRE(r.residual_trace[i] <= r.residual_trace[i - 1] + 1e-12);
    }
    REQUIRE(r.residual_trace.back() == r.residual_norm);

    // Residual orthogonal to every selected column.
    std::vector<cdouble> x(a.cols());
    for (std::size_t i = 0; i < r.support.size(); ++i) x[r.support[i]] = r.coefficients[i];
    std::vector<cdouble> res = multiply(a, std::span<const cdouble>(x));
    for (std::size_t i = 0; i < res.size(); ++i) res[i] = in.y[i] - res[i];
    const double ynorm = norm2(std::span<const cdouble>(in.y));
    REQUIRE(std::abs(norm2(std::span<const cdouble>(res)) - r.residual_norm) <= 1e-10 * ynorm);
    for (std::size_t col : r.support) {
      cdouble ip{};
      for (std::size_t i = 0; i < res.size(); ++i) ip += std::conj(a(i, col)) * res[i];
      REQUIRE(std::abs(ip) <= 1e-9 * ynorm);
    }
  }
}

TEST_CASE("omp is scale covariant") {
  Philox4x32 g(33, 0, 0, 0);
  const ComplexMatrix& a = a103();
  for (int t = 0; t < 50; ++t) {
    const Instance in = planted(a, 8, g);
    const RecoveryResult<cdouble> base = omp(a, std::span<const cdouble>(in.y), iterations(8));
    for (const cdouble alpha : {cdouble{3.5, 0.0}, cdouble{0.01, 0.0}, std::polar(1.0, 0.7), std::polar(1.0, -2.9)}) {
      std::vector<cdouble> ys = in.y;
      for (cdouble& v : ys) v *= alpha;
      const RecoveryResult<cdouble> scaled = omp(a, std::span<const cdouble>(ys), iterations(8));
      REQUIRE(scaled.support == base.support);
      for (std::size_t i = 0; i < base.coefficients.size(); ++i) {
        REQUIRE(std::abs(scaled.coefficients[i] - alpha * base.coefficients[i]) <= 1e-9 * std::abs(alpha));
      }
    }
  }
}

TEST_CASE("omp breaks ties towards the lowest index") {
  RealMatrix phi(2, 3, ColumnState::UnitColumns);
  phi(0, 0) = 1.0;
  phi(1, 1) = 1.0;
  phi(0, 2) = phi(1, 2) = 1.0 / std::sqrt(2.0);
  const std::vector<double> y{1.0, 1.0};
  // Column 2 has the largest correlation; columns 0 and 1 tie below it.
  CHECK(omp(phi, std::span<const double>(y), iterations(1)).support == std::vector<std::size_t>{2});
  const std::vector<double> y2{1.0, -1.0};
  const RecoveryResult<double> r = omp(phi, std::span<const double>(y2), iterations(1));
  CHECK(r.support == std::vector<std::size_t>{0});
}

TEST_CASE("omp signals rank deficiency with a partial result") {
  // The residual after column 0 is orthogonal to every column, so the tie
  // goes to column 1, a copy of column 0.
  RealMatrix phi(3, 3, ColumnState::UnitColumns);
  phi(0, 0) = 1.0;
  phi(0, 1) = 1.0;
  phi(1, 2) = 1.0;
  const std::vector<double> y{1.0, 0.0, 1.0};
  RecoveryConfig c = iterations(3);
  c.residual_tolerance = 0.0;
  try {
    (void)omp(phi, std::span<const double>(y), c);
    FAIL("expected RankDeficiency");
  } catch (const RankDeficientError<double>& e) {
    CHECK(e.partial().support == std::vector<std::size_t>{0});
    CHECK_THAT(e.partial().residual_norm, WithinAbs(1.0, 1e-15));
  }
}

TEST_CASE("exact-recovery guarantee below the coherence bound") {
  const std::size_t bound = static_cast<std::size_t>(std::ceil(sparsity_guarantee(SensingParams::make(103, 1)))) - 1;
  REQUIRE(bound == 5);
  Philox4x32 g(34, 0, 0, 0);
  std::normal_distribution<double> d;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t k = 1 + static_cast<std::size_t>(t) % bound;
    const std::vector<std::size_t> support = random_support(103, k, g);
    std::vector<cdouble> x(103);
    for (std::size_t i : support) x[i] = (t % 2 == 0) ? cdouble{d(g), 0.0} : cdouble{d(g), d(g)};
    const std::vector<cdouble> y = multiply(a103(), std::span<const cdouble>(x));
    const RecoveryResult<cdouble> r = omp(a103(), std::span<const cdouble>(y), iterations(k));
    REQUIRE(support_match(r.support, support));
  }
}

TEST_CASE("least_squares") {
  const ComplexMatrix id = ComplexMatrix::identity(3);
  const std::vector<cdouble> y{{1, 2}, {3, 4}, {5, 6}};
  const LeastSquaresResult<cdouble> sq = least_squares(id, std::span<const cdouble>(y));
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(sq.coefficients[i] - y[i]) <= 1e-15);

  RealMatrix col(3, 1);
  col(0, 0) = 0.6;
  col(1, 0) = 0.8;
  const std::vector<double> y2{1.2, 1.6, 0.0};
  const LeastSquaresResult<double> single = least_squares(col, std::span<const double>(y2));
  CHECK_THAT(single.coefficients[0], WithinAbs(2.0, 1e-15));
  CHECK(norm2(std::span<const double>(single.residual)) <= 1e-15);

  // Planted solution plus a component orthogonal to the range.
  Philox4x32 g(35, 0, 0, 0);
  std::normal_distribution<double> d;
  for (int t = 0; t < 50; ++t) {
    RealMatrix phi(8, 3);
    for (double& v : phi.data()) v = d(g);
    const std::vector<double> c_star{d(g), d(g), d(g)};
    std::vector<double> w(8);
    for (double& v : w) v = d(g);
    // Project w off the columns with a plain normal-equations solve in long double.
    long double gram[3][3] = {}, rhs[3] = {};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        for (int r = 0; r < 8; ++r) gram[i][j] += static_cast<long double>(phi(r, i)) * phi(r, j);
      }
      for (int r = 0; r < 8; ++r) rhs[i] += static_cast<long double>(phi(r, i)) * w[r];
    }
    for (int i = 0; i < 3; ++i) {
      for (int k = i + 1; k < 3; ++k) {
        const long double f = gram[k][i] / gram[i][i];
        for (int j = 0; j < 3; ++j) gram[k][j] -= f * gram[i][j];
        rhs[k] -= f * rhs[i];
      }
    }
    long double coef[3];
    for (int i = 2; i >= 0; --i) {
      long double s = rhs[i];
      for (int j = i + 1; j < 3; ++j) s -= gram[i][j] * coef[j];
      coef[i] = s / gram[i][i];
    }
    std::vector<double> y3(8);
    for (int r = 0; r < 8; ++r) {
      long double proj = 0;
      for (int j = 0; j < 3; ++j) proj += phi(r, j) * coef[j];
      const double w_perp = static_cast<double>(w[r] - proj);
      y3[r] = phi(r, 0) * c_star[0] + phi(r, 1) * c_star[1] + phi(r, 2) * c_star[2] + w_perp;
    }
    const LeastSquaresResult<double> ls = least_squares(phi, std::span<const double>(y3));
    for (int j = 0; j < 3; ++j) REQUIRE(std::abs(ls.coefficients[j] - c_star[j]) <= 1e-10);
    for (int j = 0; j < 3; ++j) {
      double ip = 0;
      for (int r = 0; r < 8; ++r) ip += phi(r, j) * ls.residual[r];
      REQUIRE(std::abs(ip) <= 1e-10 * norm2(std::span<const double>(y3)));
    }
  }

  CHECK_THROWS_AS(least_squares(RealMatrix(2, 3), std::span<const double>(y2).first(2)), InvalidArgument);
  RealMatrix dup(3, 2);
  dup(0, 0) = dup(0, 1) = 1.0;
  CHECK_THROWS_AS(least_squares(dup, std::span<const double>(y2)), RankDeficiency);
}

TEST_CASE("support_match") {
  const std::vector<std::size_t> a{1, 5, 9}, b{9, 1, 5}, c{1, 5}, e;
  CHECK(support_match(a, b));
  CHECK_FALSE(support_match(c, a));
  CHECK(support_match(e, e));
}

TEST_CASE("exhaustive_sparse_solve") {
  const ComplexMatrix& a = a23();
  Philox4x32 g(36, 0, 0, 0);
  for (int t = 0; t < 20; ++t) {
    const Instance in = planted(a, 2, g);
    const ExhaustiveResult<cdouble> r = exhaustive_sparse_solve(a, std::span<const cdouble>(in.y), 2);
    std::vector<std::size_t> truth = in.support;
    std::sort(truth.begin(), truth.end());
    REQUIRE(r.support == truth);
    REQUIRE(r.residual_norm <= 1e-10);
  }

  // k = 1 picks the largest correlation.
  std::normal_distribution<double> d;
  for (int t = 0; t < 20; ++t) {
    std::vector<cdouble> y(11);
    for (cdouble& v : y) v = {d(g), d(g)};
    const ExhaustiveResult<cdouble> r = exhaustive_sparse_solve(a, std::span<const cdouble>(y), 1);
    std::size_t best = 0;
    double best_corr = -1;
    for (std::size_t c = 0; c < a.cols(); ++c) {
      cdouble ip{};
      for (std::size_t i = 0; i < 11; ++i) ip += std::conj(a(i, c)) * y[i];
      if (std::abs(ip) > best_corr) {
        best_corr = std::abs(ip);
        best = c;
      }
    }
    REQUIRE(r.support == std::vector<std::size_t>{best});
  }

  const std::vector<cdouble> y103(51);
  CHECK_THROWS_AS(exhaustive_sparse_solve(a103(), std::span<const cdouble>(y103), 5), InvalidArgument);
}

TEST_CASE("OMP agrees with the exhaustive oracle when it fits the data") {
  const ComplexMatrix& a = a23();
  Philox4x32 g(37, 0, 0, 0);
  std::size_t compared = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t k = 1 + static_cast<std::size_t>(t % 2);
    const Instance in = planted(a, k, g);
    const RecoveryResult<cdouble> r = omp(a, std::span<const cdouble>(in.y), iterations(k));
    if (r.residual_norm > 1e-8) continue;
    ++compared;
    const ExhaustiveResult<cdouble> oracle = exhaustive_sparse_solve(a, std::span<const cdouble>(in.y), k);
    REQUIRE(support_match(r.support, oracle.support));
  }
  CHECK(compared > 150);
}

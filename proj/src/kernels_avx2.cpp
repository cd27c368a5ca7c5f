// SPDX-License-Identifier: Apache-2.0
// AVX2/FMA kernels. Compiled with -mavx2 -mfma; only reached through the
// dispatch table after a CPU feature check.
//
// Complex vectors are read as interleaved doubles, two complex values per
// __m256d: [re0, im0, re1, im1].
#include <immintrin.h>

#include "kernels_impl.hpp"

namespace qrsense::simd::avx2 {

namespace {

inline const double* as_doubles(const cd* p) { return reinterpret_cast<const double*>(p); }
inline double* as_doubles(cd* p) { return reinterpret_cast<double*>(p); }

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// alpha * x for two packed complex values; ar/ai are broadcasts of alpha's parts.
inline __m256d cmul(__m256d ar, __m256d ai, __m256d x) {
  const __m256d swapped = _mm256_permute_pd(x, 0b0101);
  return _mm256_fmaddsub_pd(ar, x, _mm256_mul_pd(ai, swapped));
}

}  // namespace

void axpy_real(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void axpy_complex(cd alpha, const cd* x, cd* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  const double* xd = as_doubles(x);
  double* yd = as_doubles(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d prod = cmul(ar, ai, _mm256_loadu_pd(xd + 2 * i));
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(_mm256_loadu_pd(yd + 2 * i), prod));
  }
  for (; i < n; ++i) {
    const double xr = x[i].real();
    const double xi = x[i].imag();
    y[i] = {y[i].real() + (alpha.real() * xr - alpha.imag() * xi), y[i].imag() + (alpha.real() * xi + alpha.imag() * xr)};
  }
}

void axpy_conj(cd alpha, const cd* x, cd* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  const __m256d conj_mask = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
  const double* xd = as_doubles(x);
  double* yd = as_doubles(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xc = _mm256_xor_pd(_mm256_loadu_pd(xd + 2 * i), conj_mask);
    const __m256d prod = cmul(ar, ai, xc);
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(_mm256_loadu_pd(yd + 2 * i), prod));
  }
  for (; i < n; ++i) {
    const double xr = x[i].real();
    const double xi = x[i].imag();
    y[i] = {y[i].real() + (alpha.real() * xr + alpha.imag() * xi), y[i].imag() + (alpha.imag() * xr - alpha.real() * xi)};
  }
}

double dot_real(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

cd dotc(const cd* a, const cd* b, std::size_t n) {
  // re accumulates [ar*br, ai*bi]; im accumulates [ar*bi, ai*br].
  __m256d re = _mm256_setzero_pd();
  __m256d im = _mm256_setzero_pd();
  const double* ad = as_doubles(a);
  const double* bd = as_doubles(b);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d av = _mm256_loadu_pd(ad + 2 * i);
    const __m256d bv = _mm256_loadu_pd(bd + 2 * i);
    re = _mm256_fmadd_pd(av, bv, re);
    im = _mm256_fmadd_pd(av, _mm256_permute_pd(bv, 0b0101), im);
  }
  alignas(32) double r[4];
  alignas(32) double m[4];
  _mm256_store_pd(r, re);
  _mm256_store_pd(m, im);
  double sum_re = (r[0] + r[2]) + (r[1] + r[3]);
  double sum_im = (m[0] + m[2]) - (m[1] + m[3]);
  for (; i < n; ++i) {
    sum_re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    sum_im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {sum_re, sum_im};
}

}  // namespace qrsense::simd::avx2

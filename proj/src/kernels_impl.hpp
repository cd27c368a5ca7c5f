// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>

namespace qrsense::simd {

using cd = std::complex<double>;

struct KernelTable {
  void (*axpy_real)(double alpha, const double* x, double* y, std::size_t n);
  void (*axpy_complex)(cd alpha, const cd* x, cd* y, std::size_t n);
  void (*axpy_conj)(cd alpha, const cd* x, cd* y, std::size_t n);
  double (*dot_real)(const double* a, const double* b, std::size_t n);
  cd (*dotc)(const cd* a, const cd* b, std::size_t n);
};

namespace scalar {
void axpy_real(double alpha, const double* x, double* y, std::size_t n);
void axpy_complex(cd alpha, const cd* x, cd* y, std::size_t n);
void axpy_conj(cd alpha, const cd* x, cd* y, std::size_t n);
double dot_real(const double* a, const double* b, std::size_t n);
cd dotc(const cd* a, const cd* b, std::size_t n);
}  // namespace scalar

#if defined(QRSENSE_HAVE_AVX2)
namespace avx2 {
void axpy_real(double alpha, const double* x, double* y, std::size_t n);
void axpy_complex(cd alpha, const cd* x, cd* y, std::size_t n);
void axpy_conj(cd alpha, const cd* x, cd* y, std::size_t n);
double dot_real(const double* a, const double* b, std::size_t n);
cd dotc(const cd* a, const cd* b, std::size_t n);
}  // namespace avx2
#endif

}  // namespace qrsense::simd

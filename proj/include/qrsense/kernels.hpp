// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <span>

#include "qrsense/dense.hpp"

// Vector kernels behind the recovery and Gram computations.
//
// Each kernel has a scalar reference implementation and, on x86-64 builds, an
// AVX2/FMA variant. The variant is chosen once at startup from the CPU
// features; the environment variable QRSENSE_SIMD=scalar forces the reference
// path. Results of the two paths agree to rounding (summation order differs).
namespace qrsense::simd {

enum class Level { Scalar, Avx2 };

const char* level_name(Level level) noexcept;
bool level_supported(Level level) noexcept;

Level active_level() noexcept;

/// Switch the dispatch table. Throws InvalidArgument if the level is not
/// available in this build or on this CPU.
void set_level(Level level);

/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void axpy(cdouble alpha, std::span<const cdouble> x, std::span<cdouble> y);

/// y += alpha * conj(x)
void axpy_conj(cdouble alpha, std::span<const cdouble> x, std::span<cdouble> y);

/// sum a[i] * b[i]
double dot(std::span<const double> a, std::span<const double> b);

/// sum conj(a[i]) * b[i]
cdouble dotc(std::span<const cdouble> a, std::span<const cdouble> b);

/// out = Phi^H r (Phi^T r for real Phi). out must have Phi.cols() entries.
void adjoint_multiply(const RealMatrix& phi, std::span<const double> r, std::span<double> out);
void adjoint_multiply(const ComplexMatrix& phi, std::span<const cdouble> r, std::span<cdouble> out);

}  // namespace qrsense::simd

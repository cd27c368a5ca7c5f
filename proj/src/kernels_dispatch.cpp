// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <cstring>
#include <string>

#include "kernels_impl.hpp"
#include "qrsense/errors.hpp"
#include "qrsense/kernels.hpp"

namespace qrsense::simd {

namespace {

constexpr KernelTable kScalarTable{scalar::axpy_real, scalar::axpy_complex, scalar::axpy_conj, scalar::dot_real,
                                   scalar::dotc};

#if defined(QRSENSE_HAVE_AVX2)
constexpr KernelTable kAvx2Table{avx2::axpy_real, avx2::axpy_complex, avx2::axpy_conj, avx2::dot_real, avx2::dotc};
#endif

bool cpu_has_avx2() noexcept {
#if defined(QRSENSE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* table_for(Level level) noexcept {
#if defined(QRSENSE_HAVE_AVX2)
  if (level == Level::Avx2) return &kAvx2Table;
#endif
  (void)level;
  return &kScalarTable;
}

Level detect_level() noexcept {
  if (const char* env = std::getenv("QRSENSE_SIMD"); env != nullptr && std::strcmp(env, "scalar") == 0) {
    return Level::Scalar;
  }
  return cpu_has_avx2() ? Level::Avx2 : Level::Scalar;
}

struct Dispatch {
  std::atomic<Level> level;
  std::atomic<const KernelTable*> table;

  Dispatch() : level(detect_level()), table(table_for(level.load())) {}
};

Dispatch& dispatch() noexcept {
  static Dispatch instance;
  return instance;
}

inline const KernelTable& kernels() noexcept { return *dispatch().table.load(std::memory_order_relaxed); }

void check_sizes(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw InvalidArgument(std::string(what) + ": length mismatch");
}

}  // namespace

const char* level_name(Level level) noexcept {
  switch (level) {
    case Level::Scalar:
      return "scalar";
    case Level::Avx2:
      return "avx2";
  }
  return "unknown";
}

bool level_supported(Level level) noexcept { return level == Level::Scalar || cpu_has_avx2(); }

Level active_level() noexcept { return dispatch().level.load(); }

void set_level(Level level) {
  if (!level_supported(level)) {
    throw InvalidArgument(std::string("SIMD level not available: ") + level_name(level));
  }
  dispatch().table.store(table_for(level));
  dispatch().level.store(level);
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  check_sizes(x.size(), y.size(), "axpy");
  kernels().axpy_real(alpha, x.data(), y.data(), x.size());
}

void axpy(cdouble alpha, std::span<const cdouble> x, std::span<cdouble> y) {
  check_sizes(x.size(), y.size(), "axpy");
  kernels().axpy_complex(alpha, x.data(), y.data(), x.size());
}

void axpy_conj(cdouble alpha, std::span<const cdouble> x, std::span<cdouble> y) {
  check_sizes(x.size(), y.size(), "axpy_conj");
  kernels().axpy_conj(alpha, x.data(), y.data(), x.size());
}

double dot(std::span<const double> a, std::span<const double> b) {
  check_sizes(a.size(), b.size(), "dot");
  return kernels().dot_real(a.data(), b.data(), a.size());
}

cdouble dotc(std::span<const cdouble> a, std::span<const cdouble> b) {
  check_sizes(a.size(), b.size(), "dotc");
  return kernels().dotc(a.data(), b.data(), a.size());
}

void adjoint_multiply(const RealMatrix& phi, std::span<const double> r, std::span<double> out) {
  check_sizes(r.size(), phi.rows(), "adjoint_multiply");
  check_sizes(out.size(), phi.cols(), "adjoint_multiply");
  const KernelTable& k = kernels();
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t m = 0; m < phi.rows(); ++m) k.axpy_real(r[m], phi.row(m).data(), out.data(), out.size());
}

void adjoint_multiply(const ComplexMatrix& phi, std::span<const cdouble> r, std::span<cdouble> out) {
  check_sizes(r.size(), phi.rows(), "adjoint_multiply");
  check_sizes(out.size(), phi.cols(), "adjoint_multiply");
  const KernelTable& k = kernels();
  std::fill(out.begin(), out.end(), cdouble{});
  for (std::size_t m = 0; m < phi.rows(); ++m) k.axpy_conj(r[m], phi.row(m).data(), out.data(), out.size());
}

}  // namespace qrsense::simd

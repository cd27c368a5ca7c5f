// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>

namespace qrsense {

/// Deterministic Miller-Rabin; exact for every 64-bit input.
bool is_prime(std::uint64_t n);

/// True iff n is prime, n = 3 (mod 4) and n >= 7, i.e. n = 4z+3 with z >= 1.
bool is_valid_modulus(std::uint64_t n);

/// Smallest valid modulus N' >= n. Used to suggest a grid size, never applied silently.
std::uint64_t smallest_valid_modulus_at_least(std::uint64_t n);

std::uint64_t gcd(std::uint64_t a, std::uint64_t b);

/// (a * b) mod m without overflow.
std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);

/// Reduce a signed value into [0, m).
std::uint64_t reduce_mod(std::int64_t k, std::uint64_t m);

/// Jacobi symbol (k/n) for odd n >= 3. Throws InvalidArgument for even or small n.
int jacobi_symbol(std::int64_t k, std::uint64_t n);

/// A prime modulus N = 4z+3, z >= 1.
class Modulus {
 public:
  explicit Modulus(std::uint64_t n);

  std::uint64_t value() const noexcept { return n_; }
  std::uint64_t z() const noexcept { return (n_ - 3) / 4; }

 private:
  std::uint64_t n_;
};

/// Quadratic Gauss sum by its closed form (k/N) * j * sqrt(N).
/// Throws CoprimalityError when gcd(k, N) != 1.
std::complex<double> gauss_sum(std::int64_t k, const Modulus& modulus);

/// The defining sum over m = 0..N-1 of exp(j 2 pi k m^2 / N), evaluated term by term.
std::complex<double> gauss_sum_direct(std::int64_t k, std::uint64_t n);

}  // namespace qrsense

// SPDX-License-Identifier: Apache-2.0
#include "qrsense/numtheory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qrsense/errors.hpp"
#include "qrsense/params.hpp"

namespace qrsense {

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    const std::uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  __extension__ using u128 = unsigned __int128;
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t reduce_mod(std::int64_t k, std::uint64_t m) {
  if (k >= 0) return static_cast<std::uint64_t>(k) % m;
  // -(k+1) is representable even for INT64_MIN.
  const std::uint64_t r = static_cast<std::uint64_t>(-(k + 1)) % m;
  return m - 1 - r;
}

namespace {

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

// One Miller-Rabin round; n odd, n > a.
bool strong_probable_prime(std::uint64_t n, std::uint64_t a) {
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  std::uint64_t x = pow_mod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int r = 1; r < s; ++r) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  // The first twelve primes as witnesses are sufficient below 3.3e24.
  constexpr std::uint64_t witnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  if (n < 2) return false;
  for (std::uint64_t p : witnesses) {
    if (n % p == 0) return n == p;
  }
  for (std::uint64_t a : witnesses) {
    if (!strong_probable_prime(n, a)) return false;
  }
  return true;
}

bool is_valid_modulus(std::uint64_t n) { return n >= 7 && n % 4 == 3 && is_prime(n); }

std::uint64_t smallest_valid_modulus_at_least(std::uint64_t n) {
  std::uint64_t candidate = n < 7 ? 7 : n;
  while (candidate % 4 != 3) ++candidate;
  while (!is_prime(candidate)) {
    if (candidate > UINT64_MAX - 4) throw InvalidArgument("no valid modulus representable above " + std::to_string(n));
    candidate += 4;
  }
  return candidate;
}

int jacobi_symbol(std::int64_t k, std::uint64_t n) {
  if (n < 3 || n % 2 == 0) {
    throw InvalidArgument("jacobi_symbol: modulus must be odd and >= 3, got " + std::to_string(n));
  }
  std::uint64_t a = reduce_mod(k, n);
  int sign = 1;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      const std::uint64_t r = n % 8;
      if (r == 3 || r == 5) sign = -sign;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) sign = -sign;
    a %= n;
  }
  return n == 1 ? sign : 0;
}

Modulus::Modulus(std::uint64_t n) : n_(n) {
  if (!is_valid_modulus(n)) {
    throw InvalidArgument("modulus " + std::to_string(n) + " is not a prime of the form 4z+3 with z >= 1");
  }
}

std::complex<double> gauss_sum(std::int64_t k, const Modulus& modulus) {
  const std::uint64_t n = modulus.value();
  const int symbol = jacobi_symbol(k, n);
  if (symbol == 0) {
    throw CoprimalityError("gauss_sum: k = " + std::to_string(k) + " is not coprime to N = " + std::to_string(n));
  }
  return {0.0, symbol * std::sqrt(static_cast<double>(n))};
}

std::complex<double> gauss_sum_direct(std::int64_t k, std::uint64_t n) {
  if (n == 0) throw InvalidArgument("gauss_sum_direct: N must be positive");
  const std::uint64_t kr = reduce_mod(k, n);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
  std::complex<double> sum{0.0, 0.0};
  for (std::uint64_t m = 0; m < n; ++m) {
    const std::uint64_t e = mul_mod(kr, mul_mod(m, m, n), n);
    const double angle = step * static_cast<double>(e);
    sum += std::complex<double>(std::cos(angle), std::sin(angle));
  }
  return sum;
}

SensingParams SensingParams::make(std::uint64_t n, std::uint64_t p) {
  const Modulus modulus(n);
  if (p == 0) throw InvalidArgument("p must be a positive integer");
  if (gcd(p, n) != 1) {
    throw CoprimalityError("p = " + std::to_string(p) + " is not coprime to N = " + std::to_string(n));
  }
  return SensingParams(modulus.value(), (n - 1) / 2, p);
}

std::vector<std::uint64_t> quadratic_residue_rows(const SensingParams& params) {
  const std::uint64_t n = params.N();
  const std::uint64_t p = params.p() % n;
  std::vector<std::uint64_t> rows;
  rows.reserve(params.M());
  for (std::uint64_t m = 1; m <= params.M(); ++m) {
    rows.push_back(mul_mod(p, mul_mod(m, m, n), n));
  }
  std::vector<std::uint64_t> sorted = rows;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == 0 || std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::logic_error("quadratic_residue_rows: row indexes are not distinct and nonzero");
  }
  return rows;
}

}  // namespace qrsense

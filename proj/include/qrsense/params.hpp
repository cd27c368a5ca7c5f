// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

namespace qrsense {

/// The arithmetic frame of the construction: prime N = 4z+3, M = (N-1)/2 and a
/// multiplier p coprime to N. Instances are always valid; use make().
class SensingParams {
 public:
  static SensingParams make(std::uint64_t n, std::uint64_t p = 1);

  std::uint64_t N() const noexcept { return n_; }
  std::uint64_t M() const noexcept { return m_; }
  std::uint64_t p() const noexcept { return p_; }

  friend bool operator==(const SensingParams&, const SensingParams&) = default;

 private:
  SensingParams(std::uint64_t n, std::uint64_t m, std::uint64_t p) : n_(n), m_(m), p_(p) {}

  std::uint64_t n_;
  std::uint64_t m_;
  std::uint64_t p_;
};

/// Row indexes p*m^2 mod N for m = 1..M, in increasing-m order. Distinctness is
/// checked at runtime and a violation throws std::logic_error.
std::vector<std::uint64_t> quadratic_residue_rows(const SensingParams& params);

}  // namespace qrsense

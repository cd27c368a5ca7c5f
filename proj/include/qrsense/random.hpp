// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace qrsense {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// The 128-bit counter is split into a 32-bit block index that advances as
/// output is consumed and a 96-bit stream identifier fixed at construction, so
/// every (key, stream id) pair names an independent sequence of 2^34 words.
/// Satisfies std::uniform_random_bit_generator.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox4x32(std::uint64_t key, std::uint32_t id0, std::uint32_t id1, std::uint32_t id2) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// The raw bijection: ten rounds applied to `counter` under `key`.
  static Block encrypt(Block counter, Key key) noexcept;

 private:
  Key key_;
  Block counter_;
  Block buffer_{};
  unsigned position_ = 4;
};

/// Experiment tags keep substreams of different harnesses disjoint.
enum class StreamTag : std::uint32_t {
  Generic = 0,
  RipSweep = 1,
  OmpSweep = 2,
  HarmonicSweep = 3,
  SpectrumDemo = 4,
};

/// Factory of per-trial substreams keyed by (seed, tag, k, trial index).
/// A trial's randomness depends on nothing else, so trials may run in any
/// order or concurrently without changing results.
class StreamFamily {
 public:
  StreamFamily(std::uint64_t seed, StreamTag tag) noexcept : seed_(seed), tag_(tag) {}

  Philox4x32 stream(std::uint32_t k, std::uint32_t trial) const noexcept {
    return Philox4x32(seed_, trial, k, static_cast<std::uint32_t>(tag_));
  }

  std::uint64_t seed() const noexcept { return seed_; }
  StreamTag tag() const noexcept { return tag_; }

 private:
  std::uint64_t seed_;
  StreamTag tag_;
};

}  // namespace qrsense

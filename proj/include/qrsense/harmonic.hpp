// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "qrsense/dense.hpp"
#include "qrsense/params.hpp"
#include "qrsense/random.hpp"

namespace qrsense {

/// Deterministic sub-Nyquist sampling plan.
///
/// Grid frequencies are n * f0 for n = 1..N, the grid top is fN = N * f0 and
/// the ADC runs at fS = fN / p. Sample m (m = 1..M) is taken at time l * dt
/// with l = m^2 mod N; this makes sample m equal to row m of the sensing
/// matrix built with the same p, because exp(j 2 pi n f0 l dt) = exp(j 2 pi p l n / N).
struct SamplingSchedule {
  SensingParams params;
  double f0 = 0.0;
  double fN = 0.0;
  double fS = 0.0;
  double dt = 0.0;
  std::vector<std::uint64_t> slots;      // ascending: the acquisition order of the ADC
  std::vector<std::uint64_t> row_slots;  // row_slots[m-1] = m^2 mod N: the order used by samples

  double time_of(std::uint64_t slot) const noexcept { return static_cast<double>(slot) * dt; }
};

/// Throws InvalidArgument for an invalid N (the message names the smallest
/// valid N' >= N), p not coprime to N, or f0 <= 0.
SamplingSchedule make_schedule(std::uint64_t n, std::uint64_t p, double f0);

struct HarmonicComponent {
  std::size_t index = 0;  // grid frequency index n, frequency n * f0
  double amplitude = 0.0;
  double phase = 0.0;     // radians

  friend bool operator==(const HarmonicComponent&, const HarmonicComponent&) = default;
};

/// Ground-truth tone list: distinct indexes in 1..M, amplitude > 0, phase in [0, 2 pi).
struct HarmonicSpec {
  std::vector<HarmonicComponent> components;

  void validate(std::uint64_t m) const;
};

/// Recovered tones: distinct indexes, amplitude >= 0, phase in [0, 2 pi), ascending index.
struct SpectrumEstimate {
  std::vector<HarmonicComponent> components;
  double residual_norm = 0.0;
};

/// s(t) = sum C_n cos(2 pi n f0 t + theta_n) at each schedule sample, in row
/// (increasing m) order so that samples line up with the rows of A.
std::vector<double> synthesize_samples(const HarmonicSpec& spec, const SamplingSchedule& schedule);

/// Add white Gaussian noise with variance mean(s^2) / 10^(snr_db/10).
/// An infinite snr_db returns the input unchanged. Throws InvalidArgument for
/// an all-zero input with finite SNR.
std::vector<double> add_awgn(std::span<const double> samples, double snr_db, Philox4x32& rng);

/// The real-valued system [B_r -B_i B_r B_i; B_i B_r -B_i B_r] where B is the
/// first M columns of A (the all-ones last column is dropped).
struct RealSystem {
  SensingParams params;
  ComplexMatrix B;                    // M x M, raw
  RealMatrix Bprime;                  // 2M x 4M, raw block layout
  RealMatrix Bprime_unit;             // Bprime with unit columns
  std::vector<double> column_scales;  // Bprime_unit(:, i) = Bprime(:, i) * column_scales[i]
};

RealSystem build_real_system(const SensingParams& params);

/// y' = (2 y_r ; 0).
struct MeasurementAssembly {
  std::vector<double> y_r;
  std::vector<double> y_prime;
};

/// Throws InvalidArgument unless samples.size() == m.
MeasurementAssembly assemble_measurement(std::span<const double> samples, std::uint64_t m);

/// OMP on (Bprime_unit, y') with a budget of min(4k, 2M) atoms, then folds the
/// four copies of each frequency back into one complex amplitude and keeps
/// the k strongest indexes. Throws InvalidArgument for k outside 1..M and
/// RankDeficiency if the solver hits a dependent atom.
SpectrumEstimate estimate_spectrum(const RealSystem& system, const MeasurementAssembly& assembly, std::size_t k);

/// sum C_n cos(2 pi n f0 t + theta_n) at each time.
std::vector<double> reconstruct_signal(std::span<const HarmonicComponent> components, double f0,
                                       std::span<const double> times);

/// sum |estimate - truth| / sum |truth|. Throws InvalidArgument on length
/// mismatch or an all-zero truth.
double relative_accumulated_error(std::span<const double> estimate, std::span<const double> truth);

/// Sorted frequency indexes of a component list.
std::vector<std::size_t> frequency_indexes(std::span<const HarmonicComponent> components);

/// Wrap an angle into [0, 2 pi).
double normalize_phase(double radians) noexcept;

/// Sample file: `slot,time_s,value`, rows in acquisition (ascending slot) order,
/// time at 12 significant digits.
void write_samples_csv(std::ostream& out, const SamplingSchedule& schedule, std::span<const double> samples);

/// Spectrum file: `freq_index,freq_hz,amplitude,phase_rad`.
void write_spectrum_csv(std::ostream& out, std::span<const HarmonicComponent> components, double f0);
std::vector<HarmonicComponent> read_spectrum_csv(std::istream& in);

}  // namespace qrsense

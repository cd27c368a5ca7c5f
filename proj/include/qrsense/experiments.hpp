// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qrsense/harmonic.hpp"
#include "qrsense/random.hpp"
#include "qrsense/sensing.hpp"

namespace qrsense {

enum class Experiment { RipSweep, OmpSweep, HarmonicSweep, SpectrumDemo, ReconstructDemo };

const char* experiment_name(Experiment e) noexcept;
std::optional<Experiment> parse_experiment(std::string_view name) noexcept;

/// How nonzero entries of the random sparse vectors in the OMP sweep are drawn.
enum class NonzeroDistribution { RealGaussian, ComplexGaussian };

struct ExperimentConfig {
  Experiment experiment = Experiment::RipSweep;
  std::uint64_t N = 23;
  std::uint64_t p = 1;
  std::size_t k_min = 1;
  std::size_t k_max = 11;
  std::size_t trials = 2000;
  double snr_db = HUGE_VAL;
  std::uint64_t seed = 1;
  unsigned threads = 1;  // never affects results
  std::string output_path;
  double f0 = 1.0;
  std::size_t max_harmonic_index = 50;  // harmonic experiments draw indexes from 1..this
  NonzeroDistribution nonzeros = NonzeroDistribution::RealGaussian;

  /// Throws InvalidArgument on any inconsistency.
  void validate() const;

  /// Resolved settings as `key=value` pairs; excludes threads and output path.
  std::string describe() const;
};

/// Full-size defaults for each experiment.
ExperimentConfig default_config(Experiment e);

struct EigenRow {
  std::size_t k = 0;
  std::string matrix;  // "deterministic" or "random"
  EigenSweepRecord record;
};

struct EigenTable {
  std::vector<EigenRow> rows;
};

struct SuccessRow {
  std::size_t k = 0;
  std::string matrix;
  std::size_t success_count = 0;
  std::size_t trials = 0;
  double success_rate = 0.0;
};

struct TrialTable {
  std::vector<SuccessRow> rows;
};

/// Sub-Gram eigenvalue statistics per k for A and for a random partial
/// Fourier matrix drawn once per k. Both see the same column subsets.
EigenTable run_rip_sweep(const ExperimentConfig& config);

/// OMP support-recovery rate per k on A and on random partial Fourier
/// matrices (a fresh one per trial), exactly k iterations each.
TrialTable run_omp_sweep(const ExperimentConfig& config);

/// Frequency-set recovery rate per k of the real-domain harmonic pipeline.
TrialTable run_harmonic_sweep(const ExperimentConfig& config);

struct SpectrumDemoResult {
  HarmonicSpec truth;                    // ascending index
  SpectrumEstimate estimate;
  std::vector<double> est_amplitudes;    // aligned with truth; 0 where the index was missed
  std::vector<double> est_phases;
  std::vector<double> amplitude_errors;  // |true - estimated|
  bool all_found = false;
};

/// Ten tones with amplitudes 0.1, 0.2, ..., 1.0 at random grid indexes and
/// random phases, acquired on the deterministic schedule with AWGN at
/// config.snr_db and recovered with k = 10.
SpectrumDemoResult run_spectrum_demo(const ExperimentConfig& config);

inline constexpr double kReconstructStart = 0.01;
inline constexpr double kReconstructRate = 100.0;
inline constexpr std::size_t kReconstructPoints = 50;

struct ReconstructDemoResult {
  SpectrumDemoResult spectrum;
  std::vector<double> times;
  std::vector<double> original;
  std::vector<double> reconstructed;
  double relative_error = 0.0;
};

/// The spectrum demo followed by time-domain reconstruction at 50 points on a
/// 100 Hz grid starting at t = 0.01 s.
ReconstructDemoResult run_reconstruct_demo(const ExperimentConfig& config);

/// Draw a k-tone spec: distinct indexes uniform in 1..max_index, amplitudes
/// uniform in [0.1, 1], phases uniform in [0, 2 pi).
HarmonicSpec draw_harmonic_spec(std::size_t k, std::size_t max_index, Philox4x32& rng);

void write_csv(std::ostream& out, const ExperimentConfig& config, const EigenTable& table);
void write_csv(std::ostream& out, const ExperimentConfig& config, const TrialTable& table);
void write_csv(std::ostream& out, const ExperimentConfig& config, const SpectrumDemoResult& result);
void write_csv(std::ostream& out, const ExperimentConfig& config, const ReconstructDemoResult& result);

/// Validate, run and write the experiment named in the config.
void run_experiment(const ExperimentConfig& config, std::ostream& out);

}  // namespace qrsense

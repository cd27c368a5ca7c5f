// SPDX-License-Identifier: Apache-2.0
#include "qrsense/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "qrsense/csv.hpp"
#include "qrsense/errors.hpp"
#include "qrsense/numtheory.hpp"
#include "qrsense/parallel.hpp"
#include "qrsense/recovery.hpp"

namespace qrsense {

namespace {

constexpr std::size_t kDemoTones = 10;
// Trial index reserved for per-k draws that are not tied to a single trial.
constexpr std::uint32_t kPerKStream = std::numeric_limits<std::uint32_t>::max();

const char* nonzero_name(NonzeroDistribution d) {
  return d == NonzeroDistribution::RealGaussian ? "real" : "complex";
}

bool is_sweep(Experiment e) {
  return e == Experiment::RipSweep || e == Experiment::OmpSweep || e == Experiment::HarmonicSweep;
}

std::vector<cdouble> draw_sparse_vector(std::size_t n, std::span<const std::size_t> support, NonzeroDistribution d,
                                        Philox4x32& rng) {
  std::vector<cdouble> x(n);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t idx : support) {
    if (d == NonzeroDistribution::RealGaussian) {
      x[idx] = gauss(rng);
    } else {
      const double re = gauss(rng);
      const double im = gauss(rng);
      x[idx] = cdouble(re, im) / std::numbers::sqrt2;
    }
  }
  return x;
}

bool omp_recovers(const ComplexMatrix& phi, std::span<const cdouble> x, std::span<const std::size_t> support) {
  const std::vector<cdouble> y = multiply(phi, x);
  RecoveryConfig cfg;
  cfg.max_iterations = support.size();
  cfg.residual_tolerance = 0.0;
  try {
    const RecoveryResult<cdouble> r = omp(phi, std::span<const cdouble>(y), cfg);
    return support_match(r.support, support);
  } catch (const RankDeficiency&) {
    return false;
  }
}

SuccessRow make_row(std::size_t k, std::string matrix, std::span<const char> outcomes) {
  SuccessRow row;
  row.k = k;
  row.matrix = std::move(matrix);
  row.trials = outcomes.size();
  row.success_count = static_cast<std::size_t>(std::count(outcomes.begin(), outcomes.end(), char{1}));
  row.success_rate = static_cast<double>(row.success_count) / static_cast<double>(row.trials);
  return row;
}

void write_header(std::ostream& out, const ExperimentConfig& config) {
  out << "# config: " << config.describe() << '\n';
}

void finish(std::ostream& out) {
  if (!out) throw IoError("failed writing experiment output");
}

}  // namespace

const char* experiment_name(Experiment e) noexcept {
  switch (e) {
    case Experiment::RipSweep:
      return "rip-sweep";
    case Experiment::OmpSweep:
      return "omp-sweep";
    case Experiment::HarmonicSweep:
      return "harmonic-sweep";
    case Experiment::SpectrumDemo:
      return "spectrum-demo";
    case Experiment::ReconstructDemo:
      return "reconstruct-demo";
  }
  return "unknown";
}

std::optional<Experiment> parse_experiment(std::string_view name) noexcept {
  for (Experiment e : {Experiment::RipSweep, Experiment::OmpSweep, Experiment::HarmonicSweep, Experiment::SpectrumDemo,
                       Experiment::ReconstructDemo}) {
    if (name == experiment_name(e)) return e;
  }
  return std::nullopt;
}

ExperimentConfig default_config(Experiment e) {
  ExperimentConfig c;
  c.experiment = e;
  switch (e) {
    case Experiment::RipSweep:
      c.N = 23;
      c.p = 1;
      c.k_min = 1;
      c.k_max = 11;
      c.trials = 2000;
      break;
    case Experiment::OmpSweep:
      c.N = 103;
      c.p = 1;
      c.k_min = 1;
      c.k_max = 30;
      c.trials = 10000;
      break;
    case Experiment::HarmonicSweep:
      c.N = 103;
      c.p = 100;
      c.k_min = 1;
      c.k_max = 25;
      c.trials = 10000;
      break;
    case Experiment::SpectrumDemo:
    case Experiment::ReconstructDemo:
      c.N = 103;
      c.p = 100;
      c.k_min = kDemoTones;
      c.k_max = kDemoTones;
      c.trials = 1;
      c.snr_db = 30.0;
      break;
  }
  return c;
}

void ExperimentConfig::validate() const {
  const SensingParams params = SensingParams::make(N, p);
  const std::size_t m = params.M();
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
  if (trials > std::numeric_limits<std::uint32_t>::max() - 1) throw InvalidArgument("trials too large");
  if (k_min < 1 || k_min > k_max || k_max > m) {
    throw InvalidArgument("k range must satisfy 1 <= k_min <= k_max <= M = " + std::to_string(m));
  }
  if (std::isnan(snr_db)) throw InvalidArgument("snr_db is NaN");
  if (!(f0 > 0.0) || !std::isfinite(f0)) throw InvalidArgument("f0 must be positive");
  const bool harmonic = experiment == Experiment::HarmonicSweep || experiment == Experiment::SpectrumDemo ||
                        experiment == Experiment::ReconstructDemo;
  if (harmonic) {
    if (max_harmonic_index < 1 || max_harmonic_index > m) {
      throw InvalidArgument("harmonic index range 1.." + std::to_string(max_harmonic_index) + " exceeds M = " +
                            std::to_string(m));
    }
    const std::size_t needed = experiment == Experiment::HarmonicSweep ? k_max : kDemoTones;
    if (needed > max_harmonic_index) throw InvalidArgument("more tones requested than grid indexes available");
  }
  if (experiment == Experiment::SpectrumDemo || experiment == Experiment::ReconstructDemo) {
    if (k_min != kDemoTones || k_max != kDemoTones) throw InvalidArgument("the demos use exactly 10 tones");
  }
}

std::string ExperimentConfig::describe() const {
  std::ostringstream s;
  s << "experiment=" << experiment_name(experiment) << " N=" << N << " p=" << p;
  if (is_sweep(experiment)) s << " k_min=" << k_min << " k_max=" << k_max << " trials=" << trials;
  s << " snr_db=" << csv::format(snr_db) << " seed=" << seed << " f0=" << csv::format(f0);
  if (experiment == Experiment::OmpSweep) s << " nonzeros=" << nonzero_name(nonzeros);
  if (experiment != Experiment::RipSweep && experiment != Experiment::OmpSweep) {
    s << " max_harmonic_index=" << max_harmonic_index;
  }
  if (experiment == Experiment::ReconstructDemo) {
    s << " start_s=" << csv::format(kReconstructStart) << " rate_hz=" << csv::format(kReconstructRate)
      << " points=" << kReconstructPoints;
  }
  return s.str();
}

EigenTable run_rip_sweep(const ExperimentConfig& config) {
  config.validate();
  const SensingParams params = SensingParams::make(config.N, config.p);
  const ComplexMatrix det = column_normalize(build_sensing_matrix(params));
  const StreamFamily streams(config.seed, StreamTag::RipSweep);

  EigenTable table;
  for (std::size_t k = config.k_min; k <= config.k_max; ++k) {
    Philox4x32 matrix_rng = streams.stream(static_cast<std::uint32_t>(k), kPerKStream);
    const ComplexMatrix rnd = column_normalize(random_partial_fourier(params.N(), params.M(), matrix_rng));
    table.rows.push_back({k, "deterministic", rip_eigen_sweep(det, k, config.trials, streams, config.threads)});
    table.rows.push_back({k, "random", rip_eigen_sweep(rnd, k, config.trials, streams, config.threads)});
  }
  return table;
}

TrialTable run_omp_sweep(const ExperimentConfig& config) {
  config.validate();
  const SensingParams params = SensingParams::make(config.N, config.p);
  const ComplexMatrix det = column_normalize(build_sensing_matrix(params));
  const StreamFamily streams(config.seed, StreamTag::OmpSweep);

  TrialTable table;
  for (std::size_t k = config.k_min; k <= config.k_max; ++k) {
    std::vector<char> det_ok(config.trials, 0);
    std::vector<char> rnd_ok(config.trials, 0);
    parallel_for(config.trials, config.threads, [&](std::size_t t) {
      Philox4x32 rng = streams.stream(static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(t));
      const std::vector<std::size_t> support = random_support(params.N(), k, rng);
      const std::vector<cdouble> x = draw_sparse_vector(params.N(), support, config.nonzeros, rng);
      det_ok[t] = omp_recovers(det, x, support) ? 1 : 0;
      const ComplexMatrix rnd = column_normalize(random_partial_fourier(params.N(), params.M(), rng));
      rnd_ok[t] = omp_recovers(rnd, x, support) ? 1 : 0;
    });
    table.rows.push_back(make_row(k, "deterministic", det_ok));
    table.rows.push_back(make_row(k, "random", rnd_ok));
  }
  return table;
}

HarmonicSpec draw_harmonic_spec(std::size_t k, std::size_t max_index, Philox4x32& rng) {
  const std::vector<std::size_t> picks = random_support(max_index, k, rng);
  std::uniform_real_distribution<double> amplitude(0.1, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  HarmonicSpec spec;
  for (std::size_t idx : picks) {
    const double a = amplitude(rng);
    const double th = normalize_phase(phase(rng));
    spec.components.push_back({idx + 1, a, th});
  }
  return spec;
}

TrialTable run_harmonic_sweep(const ExperimentConfig& config) {
  config.validate();
  const SamplingSchedule schedule = make_schedule(config.N, config.p, config.f0);
  const RealSystem system = build_real_system(schedule.params);
  const StreamFamily streams(config.seed, StreamTag::HarmonicSweep);

  TrialTable table;
  for (std::size_t k = config.k_min; k <= config.k_max; ++k) {
    std::vector<char> ok(config.trials, 0);
    parallel_for(config.trials, config.threads, [&](std::size_t t) {
      Philox4x32 rng = streams.stream(static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(t));
      const HarmonicSpec spec = draw_harmonic_spec(k, config.max_harmonic_index, rng);
      const std::vector<double> samples = add_awgn(synthesize_samples(spec, schedule), config.snr_db, rng);
      try {
        const SpectrumEstimate est = estimate_spectrum(system, assemble_measurement(samples, schedule.params.M()), k);
        ok[t] = frequency_indexes(est.components) == frequency_indexes(spec.components) ? 1 : 0;
      } catch (const RankDeficiency&) {
        ok[t] = 0;
      }
    });
    table.rows.push_back(make_row(k, "deterministic", ok));
  }
  return table;
}

SpectrumDemoResult run_spectrum_demo(const ExperimentConfig& config) {
  config.validate();
  const SamplingSchedule schedule = make_schedule(config.N, config.p, config.f0);
  const RealSystem system = build_real_system(schedule.params);
  Philox4x32 rng = StreamFamily(config.seed, StreamTag::SpectrumDemo).stream(kDemoTones, 0);

  SpectrumDemoResult result;
  const std::vector<std::size_t> picks = random_support(config.max_harmonic_index, kDemoTones, rng);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  for (std::size_t i = 0; i < kDemoTones; ++i) {
    const double amplitude = static_cast<double>(i + 1) / 10.0;
    result.truth.components.push_back({picks[i] + 1, amplitude, normalize_phase(phase(rng))});
  }
  std::sort(result.truth.components.begin(), result.truth.components.end(),
            [](const HarmonicComponent& a, const HarmonicComponent& b) { return a.index < b.index; });

  const std::vector<double> samples = add_awgn(synthesize_samples(result.truth, schedule), config.snr_db, rng);
  result.estimate = estimate_spectrum(system, assemble_measurement(samples, schedule.params.M()), kDemoTones);

  result.all_found = true;
  for (const HarmonicComponent& t : result.truth.components) {
    const auto hit = std::find_if(result.estimate.components.begin(), result.estimate.components.end(),
                                  [&](const HarmonicComponent& e) { return e.index == t.index; });
    const bool found = hit != result.estimate.components.end();
    result.all_found = result.all_found && found;
    result.est_amplitudes.push_back(found ? hit->amplitude : 0.0);
    result.est_phases.push_back(found ? hit->phase : 0.0);
    result.amplitude_errors.push_back(std::abs(t.amplitude - result.est_amplitudes.back()));
  }
  return result;
}

ReconstructDemoResult run_reconstruct_demo(const ExperimentConfig& config) {
  ReconstructDemoResult result;
  result.spectrum = run_spectrum_demo(config);
  result.times.resize(kReconstructPoints);
  for (std::size_t i = 0; i < kReconstructPoints; ++i) {
    result.times[i] = kReconstructStart + static_cast<double>(i) / kReconstructRate;
  }
  result.original = reconstruct_signal(result.spectrum.truth.components, config.f0, result.times);
  result.reconstructed = reconstruct_signal(result.spectrum.estimate.components, config.f0, result.times);
  result.relative_error = relative_accumulated_error(result.reconstructed, result.original);
  return result;
}

void write_csv(std::ostream& out, const ExperimentConfig& config, const EigenTable& table) {
  write_header(out, config);
  out << "k,matrix,trials,mean_max_eig,mean_min_eig,extreme_max_eig,extreme_min_eig\n";
  for (const EigenRow& r : table.rows) {
    out << r.k << ',' << r.matrix << ',' << r.record.trials << ',' << csv::format(r.record.mean_max_eig) << ','
        << csv::format(r.record.mean_min_eig) << ',' << csv::format(r.record.extreme_max_eig) << ','
        << csv::format(r.record.extreme_min_eig) << '\n';
  }
  finish(out);
}

void write_csv(std::ostream& out, const ExperimentConfig& config, const TrialTable& table) {
  write_header(out, config);
  out << "k,matrix,success_count,trials,success_rate\n";
  for (const SuccessRow& r : table.rows) {
    out << r.k << ',' << r.matrix << ',' << r.success_count << ',' << r.trials << ',' << csv::format(r.success_rate)
        << '\n';
  }
  finish(out);
}

void write_csv(std::ostream& out, const ExperimentConfig& config, const SpectrumDemoResult& result) {
  write_header(out, config);
  out << "freq_index,freq_hz,true_amplitude,true_phase_rad,est_amplitude,est_phase_rad,abs_amplitude_error\n";
  for (std::size_t i = 0; i < result.truth.components.size(); ++i) {
    const HarmonicComponent& t = result.truth.components[i];
    out << t.index << ',' << csv::format(static_cast<double>(t.index) * config.f0) << ',' << csv::format(t.amplitude)
        << ',' << csv::format(t.phase) << ',' << csv::format(result.est_amplitudes[i]) << ','
        << csv::format(result.est_phases[i]) << ',' << csv::format(result.amplitude_errors[i]) << '\n';
  }
  out << "# residual_norm=" << csv::format(result.estimate.residual_norm) << '\n';
  finish(out);
}

void write_csv(std::ostream& out, const ExperimentConfig& config, const ReconstructDemoResult& result) {
  write_header(out, config);
  out << "# relative_accumulated_error=" << csv::format(result.relative_error) << '\n';
  out << "t,original,reconstructed\n";
  for (std::size_t i = 0; i < result.times.size(); ++i) {
    out << csv::format(result.times[i], 12) << ',' << csv::format(result.original[i]) << ','
        << csv::format(result.reconstructed[i]) << '\n';
  }
  finish(out);
}

void run_experiment(const ExperimentConfig& config, std::ostream& out) {
  switch (config.experiment) {
    case Experiment::RipSweep:
      write_csv(out, config, run_rip_sweep(config));
      return;
    case Experiment::OmpSweep:
      write_csv(out, config, run_omp_sweep(config));
      return;
    case Experiment::HarmonicSweep:
      write_csv(out, config, run_harmonic_sweep(config));
      return;
    case Experiment::SpectrumDemo:
      write_csv(out, config, run_spectrum_demo(config));
      return;
    case Experiment::ReconstructDemo:
      write_csv(out, config, run_reconstruct_demo(config));
      return;
  }
}

}  // namespace qrsense

// SPDX-License-Identifier: Apache-2.0
#include "qrsense/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <string>

#include "qrsense/csv.hpp"
#include "qrsense/errors.hpp"
#include "qrsense/numtheory.hpp"
#include "qrsense/recovery.hpp"
#include "qrsense/sensing.hpp"

namespace qrsense {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double tone_sum(std::span<const HarmonicComponent> components, double f0, double t) {
  double s = 0.0;
  for (const HarmonicComponent& c : components) {
    s += c.amplitude * std::cos(kTwoPi * static_cast<double>(c.index) * f0 * t + c.phase);
  }
  return s;
}

}  // namespace

double normalize_phase(double radians) noexcept {
  double r = std::fmod(radians, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

SamplingSchedule make_schedule(std::uint64_t n, std::uint64_t p, double f0) {
  if (!is_valid_modulus(n)) {
    throw InvalidArgument("N = " + std::to_string(n) + " is not a prime of the form 4z+3; the smallest valid N' >= N is " +
                          std::to_string(smallest_valid_modulus_at_least(n)));
  }
  if (!(f0 > 0.0) || !std::isfinite(f0)) throw InvalidArgument("f0 must be a positive frequency");
  SamplingSchedule s{SensingParams::make(n, p), 0.0, 0.0, 0.0, 0.0, {}, {}};
  s.f0 = f0;
  s.fN = static_cast<double>(n) * f0;
  s.fS = s.fN / static_cast<double>(p);
  s.dt = static_cast<double>(p) / (static_cast<double>(n) * f0);
  const SensingParams squares = SensingParams::make(n, 1);
  s.row_slots = quadratic_residue_rows(squares);
  s.slots = s.row_slots;
  std::sort(s.slots.begin(), s.slots.end());
  return s;
}

void HarmonicSpec::validate(std::uint64_t m) const {
  std::set<std::size_t> seen;
  for (const HarmonicComponent& c : components) {
    if (c.index < 1 || c.index > m) {
      throw InvalidArgument("harmonic index " + std::to_string(c.index) + " outside 1.." + std::to_string(m));
    }
    if (!seen.insert(c.index).second) throw InvalidArgument("duplicate harmonic index " + std::to_string(c.index));
    if (!(c.amplitude > 0.0)) throw InvalidArgument("harmonic amplitudes must be positive");
    if (!(c.phase >= 0.0 && c.phase < kTwoPi)) throw InvalidArgument("harmonic phases must lie in [0, 2 pi)");
  }
}

std::vector<double> synthesize_samples(const HarmonicSpec& spec, const SamplingSchedule& schedule) {
  spec.validate(schedule.params.M());
  std::vector<double> samples(schedule.row_slots.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    samples[i] = tone_sum(spec.components, schedule.f0, schedule.time_of(schedule.row_slots[i]));
  }
  return samples;
}

std::vector<double> add_awgn(std::span<const double> samples, double snr_db, Philox4x32& rng) {
  std::vector<double> out(samples.begin(), samples.end());
  if (std::isinf(snr_db) && snr_db > 0) return out;
  if (std::isnan(snr_db)) throw InvalidArgument("add_awgn: SNR is NaN");
  double power = 0.0;
  for (double s : samples) power += s * s;
  if (samples.empty() || power == 0.0) throw InvalidArgument("add_awgn: finite SNR requested for an all-zero signal");
  power /= static_cast<double>(samples.size());
  const double variance = power / std::pow(10.0, snr_db / 10.0);
  std::normal_distribution<double> noise(0.0, std::sqrt(variance));
  for (double& s : out) s += noise(rng);
  return out;
}

RealSystem build_real_system(const SensingParams& params) {
  const std::size_t m = params.M();
  const ComplexMatrix a = build_sensing_matrix(params);
  RealSystem sys{params, {}, {}, {}, {}};
  sys.B = ComplexMatrix(m, m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c) sys.B(r, c) = a(r, c);
  }

  sys.Bprime = RealMatrix(2 * m, 4 * m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      const double br = sys.B(r, c).real();
      const double bi = sys.B(r, c).imag();
      sys.Bprime(r, c) = br;
      sys.Bprime(r, m + c) = -bi;
      sys.Bprime(r, 2 * m + c) = br;
      sys.Bprime(r, 3 * m + c) = bi;
      sys.Bprime(m + r, c) = bi;
      sys.Bprime(m + r, m + c) = br;
      sys.Bprime(m + r, 2 * m + c) = -bi;
      sys.Bprime(m + r, 3 * m + c) = br;
    }
  }

  const std::vector<double> norms = column_norms(sys.Bprime);
  sys.column_scales.resize(norms.size());
  std::transform(norms.begin(), norms.end(), sys.column_scales.begin(), [](double n) { return 1.0 / n; });
  sys.Bprime_unit = sys.Bprime;
  for (std::size_t r = 0; r < sys.Bprime_unit.rows(); ++r) {
    auto row = sys.Bprime_unit.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] *= sys.column_scales[c];
  }
  sys.Bprime_unit.set_state(ColumnState::UnitColumns);
  return sys;
}

MeasurementAssembly assemble_measurement(std::span<const double> samples, std::uint64_t m) {
  if (samples.size() != m) {
    throw InvalidArgument("assemble_measurement: expected " + std::to_string(m) + " samples, got " +
                          std::to_string(samples.size()));
  }
  MeasurementAssembly out;
  out.y_r.assign(samples.begin(), samples.end());
  out.y_prime.assign(2 * samples.size(), 0.0);
  for (std::size_t i = 0; i < samples.size(); ++i) out.y_prime[i] = 2.0 * samples[i];
  return out;
}

SpectrumEstimate estimate_spectrum(const RealSystem& system, const MeasurementAssembly& assembly, std::size_t k) {
  const std::size_t m = system.params.M();
  if (k < 1 || k > m) throw InvalidArgument("estimate_spectrum: k must lie in 1.." + std::to_string(m));
  if (assembly.y_prime.size() != 2 * m) throw InvalidArgument("estimate_spectrum: measurement size mismatch");

  RecoveryConfig config;
  config.max_iterations = std::min(4 * k, 2 * m);
  const RecoveryResult<double> fit = omp(system.Bprime_unit, std::span<const double>(assembly.y_prime), config);

  std::vector<double> x(4 * m, 0.0);
  for (std::size_t i = 0; i < fit.support.size(); ++i) {
    x[fit.support[i]] = fit.coefficients[i] * system.column_scales[fit.support[i]];
  }
  // Average the two redundant copies: x' = (x1r; x1i; x1r; -x1i).
  std::vector<cdouble> folded(m);
  for (std::size_t n = 0; n < m; ++n) {
    folded[n] = {(x[n] + x[2 * m + n]) / 2.0, (x[m + n] - x[3 * m + n]) / 2.0};
  }

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(folded[a]) > std::abs(folded[b]); });
  order.resize(k);
  std::sort(order.begin(), order.end());

  SpectrumEstimate est;
  est.residual_norm = fit.residual_norm;
  for (std::size_t n : order) {
    est.components.push_back({n + 1, std::abs(folded[n]), normalize_phase(std::arg(folded[n]))});
  }
  return est;
}

std::vector<double> reconstruct_signal(std::span<const HarmonicComponent> components, double f0,
                                       std::span<const double> times) {
  std::vector<double> out(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) out[i] = tone_sum(components, f0, times[i]);
  return out;
}

double relative_accumulated_error(std::span<const double> estimate, std::span<const double> truth) {
  if (estimate.size() != truth.size()) throw InvalidArgument("relative_accumulated_error: length mismatch");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    num += std::abs(estimate[i] - truth[i]);
    den += std::abs(truth[i]);
  }
  if (den == 0.0) throw InvalidArgument("relative_accumulated_error: truth is all zero");
  return num / den;
}

std::vector<std::size_t> frequency_indexes(std::span<const HarmonicComponent> components) {
  std::vector<std::size_t> idx;
  idx.reserve(components.size());
  for (const HarmonicComponent& c : components) idx.push_back(c.index);
  std::sort(idx.begin(), idx.end());
  return idx;
}

void write_samples_csv(std::ostream& out, const SamplingSchedule& schedule, std::span<const double> samples) {
  if (samples.size() != schedule.row_slots.size()) throw InvalidArgument("write_samples_csv: sample count mismatch");
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return schedule.row_slots[a] < schedule.row_slots[b]; });
  out << "slot,time_s,value\n";
  for (std::size_t i : order) {
    const std::uint64_t slot = schedule.row_slots[i];
    out << slot << ',' << csv::format(schedule.time_of(slot), 12) << ',' << csv::format(samples[i]) << '\n';
  }
  if (!out) throw IoError("write_samples_csv: stream write failed");
}

void write_spectrum_csv(std::ostream& out, std::span<const HarmonicComponent> components, double f0) {
  out << "freq_index,freq_hz,amplitude,phase_rad\n";
  for (const HarmonicComponent& c : components) {
    out << c.index << ',' << csv::format(static_cast<double>(c.index) * f0) << ',' << csv::format(c.amplitude) << ','
        << csv::format(c.phase) << '\n';
  }
  if (!out) throw IoError("write_spectrum_csv: stream write failed");
}

std::vector<HarmonicComponent> read_spectrum_csv(std::istream& in) {
  std::string line;
  std::getline(in, line);
  while (!line.empty() && line.front() == '#' && std::getline(in, line)) {
  }
  if (csv::split(line) != std::vector<std::string_view>{"freq_index", "freq_hz", "amplitude", "phase_rad"}) {
    throw IoError("read_spectrum_csv: missing header freq_index,freq_hz,amplitude,phase_rad");
  }
  std::vector<HarmonicComponent> out;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    const auto f = csv::split(line);
    if (f.size() != 4) throw IoError("read_spectrum_csv: expected 4 fields");
    const long long index = csv::parse_integer(f[0]);
    if (index < 1) throw IoError("read_spectrum_csv: frequency index must be >= 1");
    out.push_back({static_cast<std::size_t>(index), csv::parse_double(f[2]), csv::parse_double(f[3])});
  }
  return out;
}

}  // namespace qrsense

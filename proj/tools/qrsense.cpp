// SPDX-License-Identifier: Apache-2.0
// qrsense: experiment harness and export utilities.
//
//   qrsense <experiment> --N --p --k-min --k-max --trials --snr-db --seed --out
//   qrsense export-matrix --N --p [--normalize] --out
//   qrsense schedule --N --p --f0 [--spectrum FILE] --out
//
// Exit codes: 0 success, 1 validation error, 2 I/O error.
#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qrsense/csv.hpp"
#include "qrsense/errors.hpp"
#include "qrsense/experiments.hpp"
#include "qrsense/harmonic.hpp"
#include "qrsense/kernels.hpp"
#include "qrsense/numtheory.hpp"
#include "qrsense/sensing.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

struct ExperimentOptions {
  std::optional<std::uint64_t> n, p, seed;
  std::optional<std::size_t> k_min, k_max, trials, max_index;
  std::optional<std::string> snr_db;
  std::string nonzeros = "real";
  unsigned threads = 1;
  std::string out;
};

void add_experiment_options(CLI::App* cmd, ExperimentOptions& o) {
  cmd->add_option("--N", o.n, "Prime grid size N = 4z+3");
  cmd->add_option("--p", o.p, "Multiplier / rate divisor coprime to N");
  cmd->add_option("--k-min", o.k_min, "Smallest sparsity");
  cmd->add_option("--k-max", o.k_max, "Largest sparsity");
  cmd->add_option("--trials", o.trials, "Trials per k");
  cmd->add_option("--snr-db", o.snr_db, "SNR in dB, or inf");
  cmd->add_option("--seed", o.seed, "64-bit seed");
  cmd->add_option("--max-index", o.max_index, "Harmonic indexes are drawn from 1..max-index");
  cmd->add_option("--nonzeros", o.nonzeros, "omp-sweep nonzero values: real or complex")
      ->check(CLI::IsMember({"real", "complex"}));
  cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores); results do not depend on it");
  cmd->add_option("--out", o.out, "Output CSV path")->required();
}

qrsense::ExperimentConfig resolve(qrsense::Experiment e, const ExperimentOptions& o) {
  qrsense::ExperimentConfig c = qrsense::default_config(e);
  if (o.n) c.N = *o.n;
  if (o.p) c.p = *o.p;
  if (o.seed) c.seed = *o.seed;
  if (o.trials) c.trials = *o.trials;
  if (o.max_index) c.max_harmonic_index = *o.max_index;
  if (o.snr_db) {
    try {
      c.snr_db = qrsense::csv::parse_double(*o.snr_db);
    } catch (const qrsense::IoError&) {
      throw qrsense::InvalidArgument("--snr-db must be a number or inf, got " + *o.snr_db);
    }
  }
  // Rip sweep defaults to the full range 1..M of whatever N was chosen.
  if (e == qrsense::Experiment::RipSweep && o.n && !o.k_max && qrsense::is_valid_modulus(c.N)) c.k_max = (c.N - 1) / 2;
  if (o.k_min) c.k_min = *o.k_min;
  if (o.k_max) c.k_max = *o.k_max;
  c.nonzeros = o.nonzeros == "complex" ? qrsense::NonzeroDistribution::ComplexGaussian
                                       : qrsense::NonzeroDistribution::RealGaussian;
  c.threads = o.threads;
  c.output_path = o.out;
  return c;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw qrsense::IoError("cannot open output file " + path);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic quadratic-residue partial Fourier sensing: experiments and exports"};
  app.require_subcommand(1);

  const qrsense::Experiment experiments[] = {qrsense::Experiment::RipSweep, qrsense::Experiment::OmpSweep,
                                             qrsense::Experiment::HarmonicSweep, qrsense::Experiment::SpectrumDemo,
                                             qrsense::Experiment::ReconstructDemo};
  ExperimentOptions exp_opts;
  std::vector<std::pair<CLI::App*, qrsense::Experiment>> exp_cmds;
  for (qrsense::Experiment e : experiments) {
    CLI::App* cmd = app.add_subcommand(qrsense::experiment_name(e), "Run the " + std::string(qrsense::experiment_name(e)) + " experiment");
    add_experiment_options(cmd, exp_opts);
    exp_cmds.emplace_back(cmd, e);
  }

  std::uint64_t mat_n = 0, mat_p = 1;
  bool normalize = false;
  std::string mat_out;
  CLI::App* export_cmd = app.add_subcommand("export-matrix", "Write the deterministic sensing matrix as CSV");
  export_cmd->add_option("--N", mat_n, "Prime grid size N = 4z+3")->required();
  export_cmd->add_option("--p", mat_p, "Multiplier coprime to N");
  export_cmd->add_flag("--normalize", normalize, "Scale columns to unit norm");
  export_cmd->add_option("--out", mat_out, "Output CSV path")->required();

  std::uint64_t sch_n = 0, sch_p = 1;
  double sch_f0 = 1.0;
  std::string sch_out, sch_spectrum;
  CLI::App* schedule_cmd = app.add_subcommand("schedule", "Write the deterministic sampling schedule");
  schedule_cmd->add_option("--N", sch_n, "Prime grid size N = 4z+3")->required();
  schedule_cmd->add_option("--p", sch_p, "Rate divisor fN/fS, coprime to N");
  schedule_cmd->add_option("--f0", sch_f0, "Fundamental frequency in Hz");
  schedule_cmd->add_option("--spectrum", sch_spectrum, "Spectrum CSV to sample (freq_index,freq_hz,amplitude,phase_rad)");
  schedule_cmd->add_option("--out", sch_out, "Output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    for (const auto& [cmd, e] : exp_cmds) {
      if (!cmd->parsed()) continue;
      const qrsense::ExperimentConfig config = resolve(e, exp_opts);
      config.validate();
      std::ofstream out = open_output(config.output_path);
      qrsense::run_experiment(config, out);
      std::cerr << "qrsense: " << qrsense::experiment_name(e) << " done (kernels: "
                << qrsense::simd::level_name(qrsense::simd::active_level()) << ")\n";
      return 0;
    }
    if (export_cmd->parsed()) {
      const qrsense::SensingParams params = qrsense::SensingParams::make(mat_n, mat_p);
      qrsense::ComplexMatrix a = qrsense::build_sensing_matrix(params);
      if (normalize) a = qrsense::column_normalize(std::move(a));
      std::ofstream out = open_output(mat_out);
      qrsense::write_matrix_csv(out, a);
      return 0;
    }
    if (schedule_cmd->parsed()) {
      const qrsense::SamplingSchedule schedule = qrsense::make_schedule(sch_n, sch_p, sch_f0);
      qrsense::HarmonicSpec spec;
      if (!sch_spectrum.empty()) {
        std::ifstream in(sch_spectrum);
        if (!in) throw qrsense::IoError("cannot open spectrum file " + sch_spectrum);
        spec.components = qrsense::read_spectrum_csv(in);
      }
      const std::vector<double> samples = qrsense::synthesize_samples(spec, schedule);
      std::ofstream out = open_output(sch_out);
      out << "# schedule: N=" << schedule.params.N() << " M=" << schedule.params.M() << " p=" << schedule.params.p()
          << " f0=" << qrsense::csv::format(schedule.f0) << " fN=" << qrsense::csv::format(schedule.fN)
          << " fS=" << qrsense::csv::format(schedule.fS) << " dt=" << qrsense::csv::format(schedule.dt) << '\n';
      qrsense::write_samples_csv(out, schedule, samples);
      return 0;
    }
  } catch (const qrsense::IoError& e) {
    std::cerr << "qrsense: I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const qrsense::InvalidArgument& e) {
    std::cerr << "qrsense: invalid argument: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}

// Copyright 2026 The afcmem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Experiment orchestration: configuration, the composed device model, the
// three experiments (echo trace, process tomography, efficiency versus
// storage time), the ensemble cross-check and phase-plate nulling.

#include "afcmem/comb.hpp"
#include "afcmem/ensemble.hpp"
#include "afcmem/polar.hpp"
#include "afcmem/tomo.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace afcmem::runner {

inline constexpr int kSchemaVersion = 1;

struct PulseConfig {
  double fwhm_ns = 25.0;
  double t0_ns = -300.0; // start of the time grid
  bool operator==(const PulseConfig &) const = default;
};

struct EchoConfig {
  double gate_ns = 50.0;
  int n_echoes = 2;
  double jitter_ns = 1.0; // gaussian sigma applied to detected traces
  bool operator==(const EchoConfig &) const = default;
};

struct CrystalConfig {
  double length_mm = 1.40;
  double depth_scale = 1.0; // multiplies the comb optical depths
  bool operator==(const CrystalConfig &) const = default;
};

struct ChainConfig {
  CrystalConfig crystal1;
  CrystalConfig crystal2;
  double residual_v_fraction = 0.05; // d_V / d
  double birefringence = 0.21;
  double wavelength_nm = 879.7;
  double hwp3_deg = 45.0;
  double phase_plate_deg = 0.0;
  double hwp4_deg = 45.0;
  bool auto_null = true; // replace phase_plate_deg by the nulled angle
  bool operator==(const ChainConfig &) const = default;
};

struct NoiseConfig {
  double mean_photon_number = 0.8;
  double detection_efficiency = 0.4;
  double path_transmission = 0.6;
  double dark_prob_per_gate = 5e-6;
  bool operator==(const NoiseConfig &) const = default;
};

struct TimingSequence {
  int prep_repeats = 100;
  double sweep_mhz = 100.0;
  double sweep_us = 100.0;
  double wait_ms = 1.2;
  int probe_pulses = 1600;
  double probe_rate_mhz = 1.0;
  double cycle_rate_hz = 40.0;

  double cycle_duration_ms() const;
  double trials_per_second() const;
  void validate(const std::string &prefix = "timing") const;
  bool operator==(const TimingSequence &) const = default;
};

struct TomographyConfig {
  std::uint64_t trials_per_setting = 6'400'000;
  int bootstrap_resamples = 200;
  double mle_tol = 1e-11;
  int mle_max_iter = 100'000;
  bool operator==(const TomographyConfig &) const = default;
};

struct EfficiencyConfig {
  std::vector<double> storage_times_ns = {100, 150, 200, 250, 300,
                                          350, 400, 450, 500};
  bool operator==(const EfficiencyConfig &) const = default;
};

struct OracleConfig {
  std::uint64_t n_atoms = 100'000;
  double dephase_sigma_rad = 0.0;
  bool operator==(const OracleConfig &) const = default;
};

struct ExperimentConfig {
  int schema_version = kSchemaVersion;
  std::string name = "custom";
  std::uint64_t seed = 1;
  std::string output_dir;
  comb::CombSpec comb;
  comb::SpectralGrid grid;
  PulseConfig pulse;
  EchoConfig echo;
  ChainConfig chain;
  NoiseConfig noise;
  TimingSequence timing;
  TomographyConfig tomography;
  EfficiencyConfig efficiency;
  OracleConfig oracle;

  void validate() const;
  bool operator==(const ExperimentConfig &) const = default;
};

// YAML text in, validated config out; errors name the offending field.
ExperimentConfig parse_config(const std::string &text);
// Canonical YAML: every field, fixed key order, round-trip precision.
std::string serialize_config(const ExperimentConfig &cfg);
// A file path, or a shipped preset name (paper_200ns, paper_500ns, ideal;
// underscores optional).
ExperimentConfig load_config(const std::string &path_or_preset);

std::vector<std::string> preset_names();
std::optional<std::string> preset_text(const std::string &name);

// Hex SHA-256 of the canonical serialisation.
std::string config_hash(const ExperimentConfig &cfg);

// Independent stream seeds: splitmix64(seed + stream * golden gamma).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

namespace streams {
inline constexpr std::uint64_t counts = 1;
inline constexpr std::uint64_t bootstrap = 2;
inline constexpr std::uint64_t oracle = 3;
} // namespace streams

// The composed physical device for one configuration.
struct DeviceModel {
  comb::SpectralGrid grid;
  comb::PulseWaveform pulse;
  comb::TransferFunction crystal1_h, crystal1_v, crystal2_h, crystal2_v;
  double retardance1_rad = 0.0;
  double retardance2_rad = 0.0;
  polar::DeviceChain chain; // amplitudes extracted from the transfer functions
};

DeviceModel build_device(const ExperimentConfig &cfg);
DeviceModel build_device(const ExperimentConfig &cfg, double phase_plate_deg);

struct PolarizedWaveform {
  comb::PulseWaveform h;
  comb::PulseWaveform v;
  // sqrt(|h|^2 + |v|^2): carries intensity for echo extraction.
  comb::PulseWaveform intensity_envelope() const;
};

// Full spectral Jones propagation of `pulse * input` through the chain.
PolarizedWaveform propagate_device(const DeviceModel &device,
                                   const polar::JonesVector &input);

// Device first-echo efficiency for a diagonal (H+V) input.
double device_efficiency(const ExperimentConfig &cfg);

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::string to_csv() const;
};

struct RunReport {
  std::string experiment;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string version;
  nlohmann::ordered_json results;
  std::vector<Table> tables;
  // Pre-rendered CSV files (name without extension, contents).
  std::vector<std::pair<std::string, std::string>> raw_csv;

  nlohmann::ordered_json to_json() const;
  std::string json_text() const;
  const Table *table(const std::string &name) const;
  // Writes <experiment>.json or one <table>.csv per table into `dir`.
  void write(const std::string &dir, const std::string &format) const;
};

std::string version_string();

RunReport run_echo_trace(const ExperimentConfig &cfg);
RunReport run_qpt(const ExperimentConfig &cfg, int threads = 1);
RunReport run_efficiency_curve(const ExperimentConfig &cfg,
                               const std::vector<double> &storage_times_ns);
RunReport run_oracle(const ExperimentConfig &cfg, int threads = 1);

struct NullResult {
  double theta_deg = 0.0;
  double fidelity_before = 0.0; // pure-channel F_p at the configured angle
  double fidelity_after = 0.0;
};
NullResult auto_null_phase_plate(const ExperimentConfig &cfg);
RunReport run_null_phase(const ExperimentConfig &cfg);

struct CalibrationTargets {
  double short_storage_ns = 200.0;
  double long_storage_ns = 500.0;
  double efficiency_short = 0.069;
  double fidelity_short = 0.998;
  double fidelity_long = 0.984;
};

struct CalibrationResult {
  double peak_optical_depth = 0.0;
  double tooth_fwhm_mhz = 0.0;
  double finesse_short = 0.0;
  double dark_prob_per_gate = 0.0;
  double efficiency_short = 0.0;
  double efficiency_long = 0.0;
  double efficiency_long_target = 0.0;
};

// Fits (d, F) so that device eta_1 hits the short-storage target and the
// long/short efficiency ratio matches the one implied by the two fidelities
// under a single dark rate; then sets the dark rate.
CalibrationResult calibrate(const ExperimentConfig &base,
                            const CalibrationTargets &targets = {});
RunReport run_calibration(const ExperimentConfig &cfg);

} // namespace afcmem::runner

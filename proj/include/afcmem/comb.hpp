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

// Atomic-frequency-comb absorber: spectra, causal transfer function and
// linear pulse propagation on a uniform FFT grid.
//
// Units: frequencies in MHz (ordinary, not angular), times in ns. A comb of
// tooth spacing D MHz rephases after 1000/D ns.

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace afcmem::comb {

using Complex = std::complex<double>;

enum class ToothShape { gaussian, lorentzian, square };

const char *to_string(ToothShape shape);
ToothShape tooth_shape_from_string(const std::string &name);

struct CombSpec {
  double tooth_spacing_mhz = 5.0;
  double tooth_fwhm_mhz = 1.0;
  double peak_optical_depth = 1.0;
  double background_depth = 0.0;
  double bandwidth_mhz = 100.0;
  ToothShape tooth_shape = ToothShape::gaussian;

  double finesse() const { return tooth_spacing_mhz / tooth_fwhm_mhz; }
  double storage_time_ns() const { return 1000.0 / tooth_spacing_mhz; }

  // Throws Error(config_invalid) naming the field relative to `prefix`.
  void validate(const std::string &prefix = "comb") const;

  bool operator==(const CombSpec &) const = default;
};

// Uniform frequency grid shared with the time grid through the DFT:
// dt_ns = 1000 / span_mhz, window = n_points * dt_ns.
// Sample k sits at k*resolution for k < n/2 and (k-n)*resolution otherwise.
struct SpectralGrid {
  std::size_t n_points = 4096;
  double span_mhz = 400.0;

  double resolution_mhz() const {
    return span_mhz / static_cast<double>(n_points);
  }
  double dt_ns() const { return 1000.0 / span_mhz; }
  double window_ns() const { return static_cast<double>(n_points) * dt_ns(); }
  double frequency_mhz(std::size_t k) const;

  void validate(const std::string &prefix = "grid") const;
  // Tooth resolution and span coverage for a given comb.
  void check_samples(const CombSpec &spec) const;

  bool operator==(const SpectralGrid &) const = default;
};

// Absorption exponent alpha(nu) (energy attenuation exp(-alpha)) in FFT order.
std::vector<double> build_absorption_profile(const CombSpec &spec,
                                             const SpectralGrid &grid);

// Area of one tooth above background, d * gamma * sqrt(pi / (4 ln 2)) for
// gaussian teeth.
double gaussian_tooth_area(const CombSpec &spec);

// Kramers-Kronig partner of alpha/2 (Hilbert transform along the frequency
// axis, zero-padded to twice the length). Input and output in FFT order.
std::vector<double> dispersion_phase(std::span<const double> alpha,
                                     const SpectralGrid &grid);

struct TransferFunction {
  SpectralGrid grid;
  std::vector<Complex> amplitude; // t(nu) = exp(-alpha/2 + i*phi), FFT order
};

// `with_dispersion = false` drops the phase; kept for the causality
// comparison, never used by the experiments.
TransferFunction transfer_from_profile(std::span<const double> alpha,
                                       const SpectralGrid &grid,
                                       bool with_dispersion = true);
TransferFunction make_transfer_function(const CombSpec &spec,
                                        const SpectralGrid &grid);

struct PulseWaveform {
  double t0_ns = 0.0;
  double dt_ns = 1.0;
  std::vector<Complex> envelope;

  std::size_t size() const { return envelope.size(); }
  double time_ns(std::size_t j) const {
    return t0_ns + static_cast<double>(j) * dt_ns;
  }
  // sum |e|^2 dt
  double energy() const;
  double energy_between(double t_begin_ns, double t_end_ns) const;
};

// Gaussian envelope whose intensity FWHM is `fwhm_ns`, peak at t = 0, on the
// time grid of `grid` starting at `t0_ns`.
PulseWaveform gaussian_pulse(const SpectralGrid &grid, double fwhm_ns,
                             double t0_ns, Complex amplitude = 1.0);

std::vector<Complex> spectrum(const PulseWaveform &pulse);
PulseWaveform from_spectrum(const PulseWaveform &like,
                            std::span<const Complex> spec);

// Exact fractional delay through the spectrum.
PulseWaveform delayed(const PulseWaveform &pulse, double delay_ns);

PulseWaveform propagate_pulse(const PulseWaveform &pulse,
                              const TransferFunction &tf);

struct Echo {
  int order = 0;
  double center_time_ns = 0.0;
  double efficiency = 0.0;
};

struct EchoReport {
  double transmitted_fraction = 0.0;
  std::vector<Echo> echoes;

  double total_echo_efficiency() const;
};

// Echo n is gated on [n/D - gate/2, n/D + gate/2]; the transmitted pulse is
// everything before half an echo period. Efficiencies are relative to
// `input_energy`.
EchoReport extract_echoes(const PulseWaveform &out, double input_energy,
                          double spacing_mhz, int n_max, double gate_ns);

// Projection of `out` on `reference` delayed by `delay_ns`, restricted to
// |t - delay| <= window/2. Equals c when out = c * reference(t - delay) there.
Complex gated_amplitude(const PulseWaveform &out,
                        const PulseWaveform &reference, double delay_ns,
                        double window_ns);

// Forward-recall estimate (d/F)^2 exp(-d/F) exp(-7/F^2) exp(-d0).
double analytic_efficiency(const CombSpec &spec);

// Pump-burned profile from a frequency-swept preparation sequence. The sweep
// covers [-sweep/2, sweep/2] in equal steps; step k dwells sweep_us/steps and
// pumps with power amplitude^2.
struct BleachingModel {
  double kappa = 1.0; // per (unit power * us/MHz) per repeat
  double floor = 0.0; // residual absorption at full bleaching
};

struct SampledProfile {
  SpectralGrid grid;
  std::vector<double> alpha; // FFT order
};

SampledProfile prep_sequence_to_comb(double sweep_mhz, double sweep_us,
                                     int repeats,
                                     std::span<const double> step_amplitudes,
                                     double alpha0, const BleachingModel &model,
                                     const SpectralGrid &grid);

// Centered (ascending-frequency) copy of an FFT-ordered array, with its axis.
struct CenteredSeries {
  std::vector<double> axis;
  std::vector<double> values;
};
CenteredSeries centered(std::span<const double> fft_ordered,
                        const SpectralGrid &grid);

} // namespace afcmem::comb

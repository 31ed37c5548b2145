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

#include "afcmem/comb.hpp"

#include "afcmem/error.hpp"
#include "fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace afcmem::comb {
namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kPi = std::numbers::pi;

bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

void require(bool ok, const std::string &field, const std::string &what) {
  if (!ok)
    fail(ErrorKind::config_invalid, what, field);
}

double tooth_value(ToothShape shape, double offset, double fwhm) {
  switch (shape) {
  case ToothShape::gaussian:
    return std::exp(-4.0 * kLn2 * offset * offset / (fwhm * fwhm));
  case ToothShape::lorentzian: {
    const double x = 2.0 * offset / fwhm;
    return 1.0 / (1.0 + x * x);
  }
  case ToothShape::square:
    return std::abs(offset) <= 0.5 * fwhm ? 1.0 : 0.0;
  }
  return 0.0;
}

// Signed DFT frequency of bin k in cycles per ns for sample period dt_ns.
double bin_frequency_ghz(std::size_t k, std::size_t n, double dt_ns) {
  const auto signed_k = k < n / 2 ? static_cast<double>(k)
                                  : static_cast<double>(k) - static_cast<double>(n);
  return signed_k / (static_cast<double>(n) * dt_ns);
}

} // namespace

const char *to_string(ToothShape shape) {
  switch (shape) {
  case ToothShape::gaussian:
    return "gaussian";
  case ToothShape::lorentzian:
    return "lorentzian";
  case ToothShape::square:
    return "square";
  }
  return "gaussian";
}

ToothShape tooth_shape_from_string(const std::string &name) {
  if (name == "gaussian")
    return ToothShape::gaussian;
  if (name == "lorentzian")
    return ToothShape::lorentzian;
  if (name == "square")
    return ToothShape::square;
  fail(ErrorKind::config_invalid,
       "unknown tooth shape '" + name + "' (gaussian|lorentzian|square)");
}

void CombSpec::validate(const std::string &prefix) const {
  const auto f = [&](const char *name) { return prefix + "." + name; };
  require(std::isfinite(tooth_spacing_mhz) && tooth_spacing_mhz > 0,
          f("tooth_spacing_mhz"), "must be > 0");
  require(std::isfinite(tooth_fwhm_mhz) && tooth_fwhm_mhz > 0,
          f("tooth_fwhm_mhz"), "must be > 0");
  require(tooth_fwhm_mhz < tooth_spacing_mhz, f("tooth_fwhm_mhz"),
          "must be < tooth_spacing_mhz (finesse > 1)");
  require(std::isfinite(peak_optical_depth) && peak_optical_depth >= 0,
          f("peak_optical_depth"), "must be >= 0");
  require(std::isfinite(background_depth) && background_depth >= 0,
          f("background_depth"), "must be >= 0");
  require(std::isfinite(bandwidth_mhz) &&
              bandwidth_mhz >= 2.0 * tooth_spacing_mhz * (1.0 - 1e-12),
          f("bandwidth_mhz"), "must be >= 2 * tooth_spacing_mhz");
}

double SpectralGrid::frequency_mhz(std::size_t k) const {
  const auto signed_k = k < n_points / 2
                            ? static_cast<double>(k)
                            : static_cast<double>(k) -
                                  static_cast<double>(n_points);
  return signed_k * resolution_mhz();
}

void SpectralGrid::validate(const std::string &prefix) const {
  require(is_power_of_two(n_points) && n_points >= 16, prefix + ".n_points",
          "must be a power of two >= 16");
  require(std::isfinite(span_mhz) && span_mhz > 0, prefix + ".span_mhz",
          "must be > 0");
}

void SpectralGrid::check_samples(const CombSpec &spec) const {
  if (resolution_mhz() > spec.tooth_fwhm_mhz / 10.0 * (1.0 + 1e-12))
    fail(ErrorKind::grid_too_coarse,
         "resolution " + std::to_string(resolution_mhz()) +
             " MHz does not resolve teeth of FWHM " +
             std::to_string(spec.tooth_fwhm_mhz) + " MHz",
         "grid.n_points");
  if (span_mhz < 4.0 * spec.bandwidth_mhz * (1.0 - 1e-12))
    fail(ErrorKind::grid_too_coarse, "span must cover 4x the comb bandwidth",
         "grid.span_mhz");
}

std::vector<double> build_absorption_profile(const CombSpec &spec,
                                             const SpectralGrid &grid) {
  spec.validate();
  grid.validate();
  grid.check_samples(spec);

  const double spacing = spec.tooth_spacing_mhz;
  const auto outer = static_cast<long>(
      std::floor(spec.bandwidth_mhz / (2.0 * spacing) + 1e-9));

  std::vector<double> alpha(grid.n_points, spec.background_depth);
  for (std::size_t k = 0; k < grid.n_points; ++k) {
    const double nu = grid.frequency_mhz(k);
    const long tooth =
        std::clamp(std::lround(nu / spacing), -outer, outer);
    const double offset = nu - static_cast<double>(tooth) * spacing;
    if (std::abs(offset) > 0.5 * spacing)
      continue;
    alpha[k] += spec.peak_optical_depth *
                tooth_value(spec.tooth_shape, offset, spec.tooth_fwhm_mhz);
  }
  return alpha;
}

double gaussian_tooth_area(const CombSpec &spec) {
  return spec.peak_optical_depth * spec.tooth_fwhm_mhz *
         std::sqrt(kPi / (4.0 * kLn2));
}

std::vector<double> dispersion_phase(std::span<const double> alpha,
                                     const SpectralGrid &grid) {
  const std::size_t n = alpha.size();
  if (n != grid.n_points)
    fail(ErrorKind::invalid_argument, "profile length does not match grid");
  const std::size_t half = n / 2;

  // Ascending frequency order, baseline removed (constants carry no phase).
  const double baseline = 0.5 * (alpha[half] + alpha[half - 1]);
  std::vector<std::complex<double>> padded(2 * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    padded[i] = 0.5 * (alpha[(i + half) % n] - baseline);

  auto spec = detail::fft(padded);
  const std::size_t m = padded.size();
  for (std::size_t k = 0; k < m; ++k) {
    if (k == 0 || k == m / 2)
      spec[k] = 0.0;
    else if (k < m / 2)
      spec[k] *= std::complex<double>(0.0, -1.0);
    else
      spec[k] *= std::complex<double>(0.0, 1.0);
  }
  const auto hilbert = detail::ifft(spec);

  std::vector<double> phi(n);
  for (std::size_t i = 0; i < n; ++i)
    phi[(i + half) % n] = hilbert[i].real();
  return phi;
}

TransferFunction transfer_from_profile(std::span<const double> alpha,
                                       const SpectralGrid &grid,
                                       bool with_dispersion) {
  std::vector<double> phi(alpha.size(), 0.0);
  if (with_dispersion)
    phi = dispersion_phase(alpha, grid);
  TransferFunction tf{grid, std::vector<Complex>(alpha.size())};
  for (std::size_t k = 0; k < alpha.size(); ++k)
    tf.amplitude[k] = std::exp(Complex(-0.5 * alpha[k], phi[k]));
  return tf;
}

TransferFunction make_transfer_function(const CombSpec &spec,
                                        const SpectralGrid &grid) {
  const auto alpha = build_absorption_profile(spec, grid);
  return transfer_from_profile(alpha, grid);
}

double PulseWaveform::energy() const {
  double sum = 0.0;
  for (const auto &v : envelope)
    sum += std::norm(v);
  return sum * dt_ns;
}

double PulseWaveform::energy_between(double t_begin_ns,
                                     double t_end_ns) const {
  double sum = 0.0;
  for (std::size_t j = 0; j < envelope.size(); ++j) {
    const double t = time_ns(j);
    if (t >= t_begin_ns && t < t_end_ns)
      sum += std::norm(envelope[j]);
  }
  return sum * dt_ns;
}

PulseWaveform gaussian_pulse(const SpectralGrid &grid, double fwhm_ns,
                             double t0_ns, Complex amplitude) {
  if (!(fwhm_ns > 0))
    fail(ErrorKind::invalid_argument, "pulse FWHM must be > 0",
         "pulse.fwhm_ns");
  PulseWaveform p{t0_ns, grid.dt_ns(),
                  std::vector<Complex>(grid.n_points)};
  const double a = 2.0 * kLn2 / (fwhm_ns * fwhm_ns);
  for (std::size_t j = 0; j < grid.n_points; ++j) {
    const double t = p.time_ns(j);
    p.envelope[j] = amplitude * std::exp(-a * t * t);
  }
  return p;
}

std::vector<Complex> spectrum(const PulseWaveform &pulse) {
  return detail::fft(pulse.envelope);
}

PulseWaveform from_spectrum(const PulseWaveform &like,
                            std::span<const Complex> spec) {
  return PulseWaveform{like.t0_ns, like.dt_ns, detail::ifft(spec)};
}

PulseWaveform delayed(const PulseWaveform &pulse, double delay_ns) {
  auto spec = spectrum(pulse);
  const std::size_t n = spec.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double f = bin_frequency_ghz(k, n, pulse.dt_ns);
    spec[k] *= std::polar(1.0, -2.0 * kPi * f * delay_ns);
  }
  return from_spectrum(pulse, spec);
}

PulseWaveform propagate_pulse(const PulseWaveform &pulse,
                              const TransferFunction &tf) {
  const std::size_t n = tf.grid.n_points;
  if (pulse.size() != n || tf.amplitude.size() != n)
    fail(ErrorKind::invalid_argument,
         "pulse and transfer function sample counts differ");
  if (std::abs(pulse.dt_ns * tf.grid.span_mhz / 1000.0 - 1.0) > 1e-9)
    fail(ErrorKind::invalid_argument,
         "pulse sample period does not match the transfer-function span");

  auto spec = spectrum(pulse);
  double total = 0.0;
  double outer = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double e = std::norm(spec[k]);
    total += e;
    if (std::abs(tf.grid.frequency_mhz(k)) > 0.45 * tf.grid.span_mhz)
      outer += e;
  }
  if (total > 0 && outer > 1e-8 * total)
    fail(ErrorKind::spectral_leakage,
         "pulse spectrum reaches the edge of the frequency grid");

  for (std::size_t k = 0; k < n; ++k)
    spec[k] *= tf.amplitude[k];
  return from_spectrum(pulse, spec);
}

double EchoReport::total_echo_efficiency() const {
  double sum = 0.0;
  for (const auto &e : echoes)
    sum += e.efficiency;
  return sum;
}

EchoReport extract_echoes(const PulseWaveform &out, double input_energy,
                          double spacing_mhz, int n_max, double gate_ns) {
  if (!(spacing_mhz > 0) || !(input_energy > 0) || n_max < 1 ||
      !(gate_ns > 0))
    fail(ErrorKind::invalid_argument,
         "extract_echoes needs spacing > 0, input energy > 0, n_max >= 1, "
         "gate > 0");
  const double period = 1000.0 / spacing_mhz;
  if (gate_ns >= period)
    fail(ErrorKind::overlapping_gates,
         "gate width " + std::to_string(gate_ns) +
             " ns is not shorter than the echo period " +
             std::to_string(period) + " ns",
         "echo.gate_ns");

  EchoReport report;
  report.transmitted_fraction =
      out.energy_between(-INFINITY, 0.5 * period) / input_energy;
  const double t_last = out.time_ns(out.size() - 1);
  for (int order = 1; order <= n_max; ++order) {
    const double center = order * period;
    const double lo = center - 0.5 * gate_ns;
    const double hi = center + 0.5 * gate_ns;
    if (hi > t_last)
      break;
    double weight = 0.0;
    double moment = 0.0;
    for (std::size_t j = 0; j < out.size(); ++j) {
      const double t = out.time_ns(j);
      if (t < lo || t > hi)
        continue;
      const double e = std::norm(out.envelope[j]);
      weight += e;
      moment += e * t;
    }
    report.echoes.push_back(Echo{order,
                                 weight > 0 ? moment / weight : center,
                                 weight * out.dt_ns / input_energy});
  }
  return report;
}

Complex gated_amplitude(const PulseWaveform &out,
                        const PulseWaveform &reference, double delay_ns,
                        double window_ns) {
  if (out.size() != reference.size())
    fail(ErrorKind::invalid_argument, "waveform lengths differ");
  const auto shifted = delayed(reference, delay_ns);
  Complex num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (std::abs(out.time_ns(j) - delay_ns) > 0.5 * window_ns)
      continue;
    num += std::conj(shifted.envelope[j]) * out.envelope[j];
    den += std::norm(shifted.envelope[j]);
  }
  return den > 0 ? num / den : Complex(0.0);
}

double analytic_efficiency(const CombSpec &spec) {
  if (spec.tooth_shape != ToothShape::gaussian)
    fail(ErrorKind::unsupported_shape,
         "analytic efficiency is defined for gaussian teeth only",
         "comb.tooth_shape");
  const double finesse = spec.finesse();
  if (!(finesse >= 2.0))
    fail(ErrorKind::invalid_argument,
         "analytic efficiency needs finesse >= 2");
  const double dt = spec.peak_optical_depth / finesse;
  return dt * dt * std::exp(-dt) * std::exp(-7.0 / (finesse * finesse)) *
         std::exp(-spec.background_depth);
}

SampledProfile prep_sequence_to_comb(double sweep_mhz, double sweep_us,
                                     int repeats,
                                     std::span<const double> step_amplitudes,
                                     double alpha0, const BleachingModel &model,
                                     const SpectralGrid &grid) {
  grid.validate();
  if (!(sweep_mhz > 0) || !(sweep_us > 0) || repeats < 0 ||
      step_amplitudes.empty())
    fail(ErrorKind::invalid_argument,
         "sweep needs positive range and duration, repeats >= 0 and at least "
         "one step");
  for (double a : step_amplitudes)
    if (!(a >= 0) || !std::isfinite(a))
      fail(ErrorKind::invalid_argument, "step amplitudes must be >= 0");

  const auto steps = static_cast<double>(step_amplitudes.size());
  const double step_width = sweep_mhz / steps;
  const double dwell_density = (sweep_us / steps) / step_width; // us per MHz

  SampledProfile out{grid, std::vector<double>(grid.n_points, alpha0)};
  for (std::size_t k = 0; k < grid.n_points; ++k) {
    const double pos = grid.frequency_mhz(k) + 0.5 * sweep_mhz;
    if (pos < 0 || pos >= sweep_mhz)
      continue;
    const auto step = std::min(step_amplitudes.size() - 1,
                               static_cast<std::size_t>(pos / step_width));
    const double a = step_amplitudes[step];
    const double pump = a * a * dwell_density;
    out.alpha[k] = model.floor + (alpha0 - model.floor) *
                                     std::exp(-model.kappa * repeats * pump);
  }
  return out;
}

CenteredSeries centered(std::span<const double> fft_ordered,
                        const SpectralGrid &grid) {
  const std::size_t n = fft_ordered.size();
  const std::size_t half = n / 2;
  CenteredSeries s{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = (i + half) % n;
    s.axis[i] = grid.frequency_mhz(k);
    s.values[i] = fft_ordered[k];
  }
  return s;
}

} // namespace afcmem::comb

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

#include "afcmem/ensemble.hpp"

#include "afcmem/error.hpp"
#include "afcmem/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace afcmem::ensemble {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kBlock = 4096;

double draw_offset(const comb::CombSpec &spec, std::mt19937_64 &rng) {
  const double half_period = 0.5 * spec.tooth_spacing_mhz;
  const double fwhm = spec.tooth_fwhm_mhz;
  switch (spec.tooth_shape) {
  case comb::ToothShape::gaussian: {
    std::normal_distribution<double> dist(
        0.0, fwhm / (2.0 * std::sqrt(2.0 * std::numbers::ln2)));
    for (;;) {
      const double x = dist(rng);
      if (std::abs(x) <= half_period)
        return x;
    }
  }
  case comb::ToothShape::lorentzian: {
    std::cauchy_distribution<double> dist(0.0, 0.5 * fwhm);
    for (;;) {
      const double x = dist(rng);
      if (std::abs(x) <= half_period)
        return x;
    }
  }
  case comb::ToothShape::square: {
    const double w = std::min(0.5 * fwhm, half_period);
    return std::uniform_real_distribution<double>(-w, w)(rng);
  }
  }
  return 0.0;
}

std::vector<double> draw_phases(std::size_t n, double sigma,
                                std::uint64_t seed) {
  std::vector<double> theta(n, 0.0);
  if (sigma <= 0)
    return theta;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, sigma);
  for (auto &t : theta)
    t = dist(rng);
  return theta;
}

} // namespace

AtomEnsemble sample_atoms(const comb::CombSpec &spec, std::size_t n_atoms,
                          std::uint64_t seed, double dephase_sigma_rad) {
  spec.validate();
  if (spec.peak_optical_depth <= 0)
    fail(ErrorKind::empty_comb, "comb has no teeth to sample (d = 0)",
         "comb.peak_optical_depth");
  if (n_atoms == 0)
    fail(ErrorKind::invalid_argument, "need at least one atom",
         "oracle.n_atoms");
  if (!(dephase_sigma_rad >= 0))
    fail(ErrorKind::invalid_argument, "dephasing spread must be >= 0",
         "oracle.dephase_sigma_rad");

  const auto outer = static_cast<long>(std::floor(
      spec.bandwidth_mhz / (2.0 * spec.tooth_spacing_mhz) + 1e-9));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> pick_tooth(-outer, outer);

  AtomEnsemble atoms;
  atoms.dephase_sigma_rad = dephase_sigma_rad;
  atoms.detunings_mhz.resize(n_atoms);
  atoms.weights.assign(n_atoms, 1.0 / static_cast<double>(n_atoms));
  for (auto &d : atoms.detunings_mhz) {
    const long tooth = pick_tooth(rng);
    d = static_cast<double>(tooth) * spec.tooth_spacing_mhz +
        draw_offset(spec, rng);
  }
  return atoms;
}

EmissionTrace collective_intensity(const AtomEnsemble &atoms,
                                   std::span<const double> times_ns,
                                   std::uint64_t seed, int threads) {
  const std::size_t n = atoms.size();
  const auto theta = draw_phases(n, atoms.dephase_sigma_rad, seed);
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  const std::size_t m = times_ns.size();

  std::vector<std::vector<std::complex<double>>> partial(
      blocks, std::vector<std::complex<double>>(m, 0.0));
  parallel_for(blocks, threads, [&](std::size_t b) {
    const std::size_t lo = b * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    auto &acc = partial[b];
    for (std::size_t i = 0; i < m; ++i) {
      const double w = -2.0 * kPi * 1e-3 * times_ns[i];
      double re = 0.0;
      double im = 0.0;
      for (std::size_t j = lo; j < hi; ++j) {
        const double phase = w * atoms.detunings_mhz[j] + theta[j];
        re += atoms.weights[j] * std::cos(phase);
        im += atoms.weights[j] * std::sin(phase);
      }
      acc[i] = {re, im};
    }
  });

  EmissionTrace trace{std::vector<double>(times_ns.begin(), times_ns.end()),
                      std::vector<double>(m, 0.0)};
  for (std::size_t i = 0; i < m; ++i) {
    std::complex<double> total = 0.0;
    for (std::size_t b = 0; b < blocks; ++b)
      total += partial[b][i];
    trace.intensity[i] = std::norm(total);
  }
  return trace;
}

IntensityEstimate intensity_at(const AtomEnsemble &atoms, double time_ns,
                               std::uint64_t seed) {
  const std::size_t n = atoms.size();
  const auto theta = draw_phases(n, atoms.dephase_sigma_rad, seed);
  const double w = -2.0 * kPi * 1e-3 * time_ns;

  // Weighted means and second moments of the unit phasor components.
  double mr = 0.0, mi = 0.0, srr = 0.0, sii = 0.0, sri = 0.0, w2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double phase = w * atoms.detunings_mhz[j] + theta[j];
    const double c = std::cos(phase);
    const double s = std::sin(phase);
    const double wj = atoms.weights[j];
    mr += wj * c;
    mi += wj * s;
    srr += wj * c * c;
    sii += wj * s * s;
    sri += wj * c * s;
    w2 += wj * wj;
  }
  const double vrr = (srr - mr * mr) * w2;
  const double vii = (sii - mi * mi) * w2;
  const double vri = (sri - mr * mi) * w2;
  const double var = 4.0 * (mr * mr * vrr + mi * mi * vii + 2.0 * mr * mi * vri);
  return {mr * mr + mi * mi, std::sqrt(std::max(var, 0.0))};
}

double gaussian_rephasing_factor(double finesse) {
  return std::exp(-kPi * kPi / (2.0 * std::numbers::ln2 * finesse * finesse));
}

OracleComparison oracle_vs_transfer(const comb::CombSpec &spec,
                                    const comb::SpectralGrid &grid,
                                    double pulse_fwhm_ns, double pulse_t0_ns,
                                    std::size_t n_atoms, std::uint64_t seed,
                                    int threads) {
  if (n_atoms < 10000)
    fail(ErrorKind::invalid_argument, "oracle comparison needs >= 1e4 atoms",
         "oracle.n_atoms");

  OracleComparison cmp;
  const double tau = spec.storage_time_ns();
  cmp.expected_time_ns = tau;
  cmp.time_step_ns = grid.dt_ns();
  cmp.analytic_factor =
      std::exp(-7.0 / (spec.finesse() * spec.finesse()));

  // Transfer-function engine.
  const auto alpha = comb::build_absorption_profile(spec, grid);
  const auto tf = comb::transfer_from_profile(alpha, grid);
  const auto pulse = comb::gaussian_pulse(grid, pulse_fwhm_ns, pulse_t0_ns);
  const auto out = comb::propagate_pulse(pulse, tf);
  const auto report =
      comb::extract_echoes(out, pulse.energy(), spec.tooth_spacing_mhz, 1,
                           0.5 * tau);
  if (report.echoes.empty())
    fail(ErrorKind::invalid_argument,
         "time window too short to contain the first echo", "grid.n_points");
  cmp.transfer_echo_time_ns = report.echoes.front().center_time_ns;

  double mean = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < grid.n_points; ++k) {
    const double nu = grid.frequency_mhz(k);
    if (nu >= -0.5 * spec.tooth_spacing_mhz &&
        nu < 0.5 * spec.tooth_spacing_mhz) {
      mean += alpha[k];
      ++count;
    }
  }
  mean /= static_cast<double>(count);
  const double structured = mean - spec.background_depth;
  const auto c1 = comb::gated_amplitude(out, pulse, tau, tau);
  cmp.transfer_dephasing_factor =
      std::norm(c1) * std::exp(mean) / (structured * structured);

  // Discrete-atom oracle on the same time grid.
  const auto atoms = sample_atoms(spec, n_atoms, seed);
  std::vector<double> times;
  const auto n_times =
      static_cast<std::size_t>(std::floor(3.5 * tau / grid.dt_ns())) + 1;
  for (std::size_t i = 0; i < n_times; ++i)
    times.push_back(static_cast<double>(i) * grid.dt_ns());
  cmp.trace = collective_intensity(atoms, times, seed, threads);

  double best = -1.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.5 * tau || times[i] > 1.5 * tau)
      continue;
    if (cmp.trace.intensity[i] > best) {
      best = cmp.trace.intensity[i];
      cmp.oracle_peak_time_ns = times[i];
    }
  }
  const auto at_tau = intensity_at(atoms, tau, seed);
  cmp.oracle_intensity_at_echo = at_tau.intensity;
  cmp.oracle_standard_error = at_tau.standard_error;
  cmp.factor_ratio = cmp.oracle_intensity_at_echo / cmp.transfer_dephasing_factor;
  return cmp;
}

} // namespace afcmem::ensemble

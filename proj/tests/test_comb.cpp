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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace afcmem;
using namespace afcmem::comb;

namespace {

constexpr double kLn2 = std::numbers::ln2;

CombSpec comb_spec(double spacing, double fwhm, double d, double d0 = 0.0) {
  CombSpec s;
  s.tooth_spacing_mhz = spacing;
  s.tooth_fwhm_mhz = fwhm;
  s.peak_optical_depth = d;
  s.background_depth = d0;
  s.bandwidth_mhz = 100.0;
  return s;
}

// 0.05 MHz bins, so tooth centres fall on samples.
SpectralGrid fine_grid() { return SpectralGrid{8192, 409.6}; }

double first_echo_efficiency(const CombSpec &spec, const SpectralGrid &grid) {
  const auto tf = make_transfer_function(spec, grid);
  const auto pulse = gaussian_pulse(grid, 25.0, -300.0);
  const auto out = propagate_pulse(pulse, tf);
  return extract_echoes(out, pulse.energy(), spec.tooth_spacing_mhz, 1, 50.0)
      .echoes.at(0)
      .efficiency;
}

std::size_t bin_of(const SpectralGrid &grid, double nu) {
  const auto n = static_cast<long>(grid.n_points);
  long k = std::lround(nu / grid.resolution_mhz());
  if (k < 0)
    k += n;
  return static_cast<std::size_t>(k);
}

} // namespace

TEST_CASE("comb spec validation names the field") {
  auto s = comb_spec(5.0, 6.0, 1.0);
  try {
    s.validate();
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::config_invalid);
    CHECK(e.field() == "comb.tooth_fwhm_mhz");
  }
  s = comb_spec(5.0, 1.0, -1.0);
  CHECK_THROWS_AS(s.validate(), Error);
  s = comb_spec(60.0, 1.0, 1.0);
  CHECK_THROWS_AS(s.validate(), Error); // bandwidth < 2 spacing
}

TEST_CASE("grid resolution must resolve the teeth") {
  const auto s = comb_spec(5.0, 0.5, 1.0);
  try {
    SpectralGrid{4096, 400.0}.check_samples(s);
    FAIL("expected grid-too-coarse");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::grid_too_coarse);
    CHECK(e.field() == "grid.n_points");
  }
  const SpectralGrid fine{8192, 400.0};
  const SpectralGrid narrow{8192, 300.0};
  const SpectralGrid odd{3000, 400.0};
  CHECK_NOTHROW(fine.check_samples(s));
  CHECK_THROWS_AS(narrow.check_samples(s), Error);
  CHECK_THROWS_AS(odd.validate(), Error);
}

TEST_CASE("absorption profile: teeth, background and band edge") {
  const auto grid = fine_grid();
  SUBCASE("20 MHz comb over 100 MHz has five teeth at d + d0") {
    auto s = comb_spec(20.0, 2.0, 1.5, 0.2);
    const auto alpha = build_absorption_profile(s, grid);
    for (int k = -2; k <= 2; ++k)
      CHECK(alpha[bin_of(grid, 20.0 * k)] == doctest::Approx(1.7).epsilon(1e-9));
    // Outside the band only the background remains.
    CHECK(alpha[bin_of(grid, 60.0)] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(alpha[bin_of(grid, -80.0)] == doctest::Approx(0.2).epsilon(1e-12));
    int peaks = 0;
    const auto c = centered(alpha, grid);
    for (std::size_t i = 1; i + 1 < c.values.size(); ++i)
      if (c.values[i] > c.values[i - 1] && c.values[i] >= c.values[i + 1] &&
          c.values[i] > 1.0)
        ++peaks;
    CHECK(peaks == 5);
  }
  SUBCASE("d = 0 leaves a flat background") {
    const auto alpha = build_absorption_profile(comb_spec(5.0, 1.0, 0.0, 0.3), grid);
    for (double a : alpha)
      CHECK(a == doctest::Approx(0.3).epsilon(1e-15));
  }
  SUBCASE("gaussian tooth area") {
    const auto s = comb_spec(5.0, 1.0, 2.0, 0.1);
    const auto alpha = build_absorption_profile(s, grid);
    double area = 0.0;
    for (std::size_t k = 0; k < grid.n_points; ++k) {
      const double nu = grid.frequency_mhz(k);
      if (nu >= -2.5 && nu < 2.5)
        area += (alpha[k] - 0.1) * grid.resolution_mhz();
    }
    CHECK(area == doctest::Approx(gaussian_tooth_area(s)).epsilon(1e-6));
    CHECK(gaussian_tooth_area(s) ==
          doctest::Approx(2.0 * std::sqrt(std::numbers::pi / (4.0 * kLn2))));
  }
  SUBCASE("periodic inside the band and never negative") {
    for (auto shape : {ToothShape::gaussian, ToothShape::lorentzian,
                       ToothShape::square}) {
      auto s = comb_spec(5.0, 1.0, 2.0);
      s.tooth_shape = shape;
      const auto alpha = build_absorption_profile(s, grid);
      for (double a : alpha)
        CHECK(a >= 0.0);
      for (double nu = -40.0; nu < 40.0; nu += 1.3)
        CHECK(alpha[bin_of(grid, nu)] ==
              doctest::Approx(alpha[bin_of(grid, nu + 5.0)]).epsilon(1e-9));
    }
  }
  SUBCASE("midpoint between teeth approaches d0 at high finesse") {
    double prev = 1e9;
    for (double fwhm : {2.0, 1.0, 0.5, 0.25}) {
      const auto alpha = build_absorption_profile(comb_spec(5.0, fwhm, 1.0, 0.2),
                                                  SpectralGrid{16384, 400.0});
      const double mid = alpha[bin_of(SpectralGrid{16384, 400.0}, 2.5)];
      CHECK(mid <= prev);
      prev = mid;
    }
    CHECK(prev == doctest::Approx(0.2).epsilon(1e-12));
  }
}

TEST_CASE("dispersion phase of a single lorentzian line") {
  const auto grid = fine_grid();
  const double d = 2.0;
  const double gamma = 0.5;
  std::vector<double> alpha(grid.n_points);
  for (std::size_t k = 0; k < grid.n_points; ++k) {
    const double x = 2.0 * grid.frequency_mhz(k) / gamma;
    alpha[k] = d / (1.0 + x * x);
  }
  const auto phi = dispersion_phase(alpha, grid);
  double worst = 0.0;
  for (std::size_t k = 0; k < grid.n_points; ++k) {
    const double x = 2.0 * grid.frequency_mhz(k) / gamma;
    worst = std::max(worst, std::abs(phi[k] - 0.5 * d * x / (1.0 + x * x)));
  }
  CHECK(worst < 1e-3 * d);
  // Odd about the line centre.
  for (double nu : {0.1, 0.7, 3.0, 25.0})
    CHECK(phi[bin_of(grid, nu)] ==
          doctest::Approx(-phi[bin_of(grid, -nu)]).epsilon(1e-9));
}

TEST_CASE("dispersion phase: flat profile and comb periodicity") {
  const auto grid = fine_grid();
  const std::vector<double> flat(grid.n_points, 0.7);
  for (double p : dispersion_phase(flat, grid))
    CHECK(std::abs(p) < 1e-12);

  const auto alpha = build_absorption_profile(comb_spec(5.0, 1.0, 2.0), grid);
  const auto phi = dispersion_phase(alpha, grid);
  // Away from the band edges the phase repeats with the tooth spacing.
  for (double nu = -20.0; nu < 15.0; nu += 0.9)
    CHECK(std::abs(phi[bin_of(grid, nu)] - phi[bin_of(grid, nu + 5.0)]) < 0.02);
}

TEST_CASE("transfer function is passive") {
  const auto grid = fine_grid();
  const auto tf = make_transfer_function(comb_spec(5.0, 1.0, 3.0, 0.5), grid);
  for (const auto &t : tf.amplitude)
    CHECK(std::abs(t) <= 1.0 + 1e-15);
}

TEST_CASE("identity medium returns the input") {
  const auto grid = fine_grid();
  const auto tf = make_transfer_function(comb_spec(5.0, 1.0, 0.0), grid);
  const auto pulse = gaussian_pulse(grid, 25.0, -300.0);
  const auto out = propagate_pulse(pulse, tf);
  double peak = 0.0;
  double err = 0.0;
  for (std::size_t j = 0; j < pulse.size(); ++j) {
    peak = std::max(peak, std::abs(pulse.envelope[j]));
    err = std::max(err, std::abs(out.envelope[j] - pulse.envelope[j]));
  }
  CHECK(err <= 1e-12 * peak);
  const auto rep = extract_echoes(out, pulse.energy(), 5.0, 3, 50.0);
  CHECK(rep.transmitted_fraction == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto &e : rep.echoes)
    CHECK(e.efficiency < 1e-10);
}

TEST_CASE("echoes of a 5 MHz comb at 200 and 400 ns") {
  const auto grid = fine_grid();
  const auto spec = comb_spec(5.0, 1.0, 2.0);
  const auto tf = make_transfer_function(spec, grid);
  const auto pulse = gaussian_pulse(grid, 25.0, -300.0);
  const auto out = propagate_pulse(pulse, tf);
  const auto rep = extract_echoes(out, pulse.energy(), 5.0, 2, 50.0);
  REQUIRE(rep.echoes.size() == 2);
  CHECK(rep.echoes[0].center_time_ns == doctest::Approx(200.0).epsilon(0.01));
  CHECK(rep.echoes[1].center_time_ns == doctest::Approx(400.0).epsilon(0.01));
  CHECK(rep.echoes[1].efficiency < rep.echoes[0].efficiency);
  CHECK(rep.transmitted_fraction + rep.total_echo_efficiency() <= 1.0);

  // Halving the spacing doubles the storage time.
  const auto spec2 = comb_spec(2.5, 0.5, 2.0);
  const auto out2 = propagate_pulse(pulse, make_transfer_function(spec2, grid));
  const auto rep2 = extract_echoes(out2, pulse.energy(), 2.5, 1, 50.0);
  CHECK(rep2.echoes.at(0).center_time_ns == doctest::Approx(400.0).epsilon(0.01));
}

TEST_CASE("causality: nothing leaves the medium before the pulse") {
  const auto grid = fine_grid();
  const auto tf = make_transfer_function(comb_spec(5.0, 1.0, 3.0, 0.2), grid);
  const auto pulse = gaussian_pulse(grid, 25.0, -300.0);
  const auto out = propagate_pulse(pulse, tf);
  CHECK(out.energy_between(-1e9, -75.0) < 1e-6 * out.energy());
}

TEST_CASE("property: passivity over random pulses and combs") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto grid = SpectralGrid{4096, 400.0};
  for (int trial = 0; trial < 20; ++trial) {
    const double spacing = 4.0 + 6.0 * u(rng);
    const double finesse = 2.0 + 6.0 * u(rng);
    const auto spec = comb_spec(spacing, spacing / finesse, 4.0 * u(rng), u(rng));
    if (spec.tooth_fwhm_mhz < 10.0 * grid.resolution_mhz())
      continue;
    const auto tf = make_transfer_function(spec, grid);
    auto pulse = gaussian_pulse(grid, 15.0 + 30.0 * u(rng), -300.0,
                                std::polar(1.0, 6.28 * u(rng)));
    pulse = delayed(pulse, 50.0 * u(rng));
    const auto out = propagate_pulse(pulse, tf);
    CHECK(out.energy() <= pulse.energy() * (1.0 + 1e-12));
  }
}

TEST_CASE("property: linearity") {
  const auto grid = SpectralGrid{4096, 400.0};
  const auto tf = make_transfer_function(comb_spec(5.0, 1.2, 2.0), grid);
  const auto p1 = gaussian_pulse(grid, 25.0, -300.0);
  const auto p2 = delayed(gaussian_pulse(grid, 15.0, -300.0), 30.0);
  const Complex a(0.3, -1.1), b(-0.7, 0.4);
  PulseWaveform mix = p1;
  for (std::size_t j = 0; j < mix.size(); ++j)
    mix.envelope[j] = a * p1.envelope[j] + b * p2.envelope[j];
  const auto o1 = propagate_pulse(p1, tf);
  const auto o2 = propagate_pulse(p2, tf);
  const auto om = propagate_pulse(mix, tf);
  double scale = 0.0, err = 0.0;
  for (std::size_t j = 0; j < om.size(); ++j) {
    scale = std::max(scale, std::abs(om.envelope[j]));
    err = std::max(err, std::abs(om.envelope[j] - a * o1.envelope[j] -
                                 b * o2.envelope[j]));
  }
  CHECK(err <= 1e-12 * scale);
}

TEST_CASE("property: first echo sits at 1/D for random F >= 3 combs") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto grid = fine_grid();
  const auto pulse = gaussian_pulse(grid, 25.0, -300.0);
  const double sigma = 25.0 / (2.0 * std::sqrt(2.0 * kLn2));
  for (int trial = 0; trial < 12; ++trial) {
    const double spacing = 3.0 + 7.0 * u(rng);
    const double finesse = 3.0 + 7.0 * u(rng);
    const auto spec = comb_spec(spacing, spacing / finesse, 0.5 + 3.0 * u(rng));
    if (spec.tooth_fwhm_mhz < 10.0 * grid.resolution_mhz())
      continue;
    const auto out = propagate_pulse(pulse, make_transfer_function(spec, grid));
    const double tau = 1000.0 / spacing;
    const auto rep = extract_echoes(out, pulse.energy(), spacing, 1,
                                    std::min(50.0, 0.9 * tau));
    CHECK(std::abs(rep.echoes.at(0).center_time_ns - tau) <= sigma);
  }
}

TEST_CASE("property: grid refinement leaves the efficiency unchanged") {
  const auto spec = comb_spec(5.0, 1.0, 2.0);
  const double coarse = first_echo_efficiency(spec, SpectralGrid{4096, 400.0});
  const double fine = first_echo_efficiency(spec, SpectralGrid{8192, 400.0});
  CHECK(std::abs(coarse - fine) < 1e-3);
}

TEST_CASE("first-echo efficiency tracks the analytic estimate") {
  const auto grid = SpectralGrid{16384, 400.0};
  for (double finesse : {3.0, 5.0, 10.0})
    for (double d : {0.5, 1.5, 3.0}) {
      const auto spec = comb_spec(5.0, 5.0 / finesse, d);
      const double numeric = first_echo_efficiency(spec, grid);
      const double analytic = analytic_efficiency(spec);
      CAPTURE(finesse);
      CAPTURE(d);
      CHECK(std::abs(numeric / analytic - 1.0) < 0.15);
    }
}

TEST_CASE("analytic efficiency limits and errors") {
  CHECK(analytic_efficiency(comb_spec(5.0, 1.0, 0.0)) == 0.0);
  // d/F = 2 at very high finesse approaches 4 e^-2.
  const auto s = comb_spec(5.0, 5.0 / 1000.0, 2000.0);
  CHECK(analytic_efficiency(s) == doctest::Approx(4.0 * std::exp(-2.0)).epsilon(1e-5));
  auto lor = comb_spec(5.0, 1.0, 1.0);
  lor.tooth_shape = ToothShape::lorentzian;
  CHECK_THROWS_AS(analytic_efficiency(lor), Error);
  try {
    analytic_efficiency(lor);
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::unsupported_shape);
  }
}

TEST_CASE("extract_echoes rejects overlapping gates") {
  const auto grid = SpectralGrid{4096, 400.0};
  const auto pulse = gaussian_pulse(grid, 25.0, -300.0);
  try {
    extract_echoes(pulse, pulse.energy(), 5.0, 1, 200.0);
    FAIL("expected overlapping-gates");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::overlapping_gates);
  }
}

TEST_CASE("propagate_pulse reports spectral leakage") {
  const auto grid = SpectralGrid{4096, 400.0};
  const auto tf = make_transfer_function(comb_spec(5.0, 1.0, 1.0), grid);
  const auto narrow = gaussian_pulse(grid, 2.0, -300.0);
  try {
    propagate_pulse(narrow, tf);
    FAIL("expected spectral-leakage");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::spectral_leakage);
  }
}

TEST_CASE("preparation sequence: bleaching model") {
  const auto grid = SpectralGrid{4096, 400.0};
  SUBCASE("no pump leaves alpha0") {
    const std::vector<double> amps(50, 0.0);
    const auto p = prep_sequence_to_comb(100.0, 100.0, 100, amps, 3.0,
                                         BleachingModel{1.0, 0.1}, grid);
    for (double a : p.alpha)
      CHECK(a == 3.0);
  }
  SUBCASE("periodic pattern gives a 20 MHz comb over 100 MHz") {
    // 100 steps of 1 MHz; pump everywhere except a 4 MHz slot every 20 MHz.
    std::vector<double> amps(100, 1.0);
    for (int s = 0; s < 100; ++s)
      if ((s + 12) % 20 < 4)
        amps[static_cast<std::size_t>(s)] = 0.0;
    const auto p = prep_sequence_to_comb(100.0, 100.0, 100, amps, 3.0,
                                         BleachingModel{1.0, 0.05}, grid);
    for (int k = -2; k <= 2; ++k)
      CHECK(p.alpha[bin_of(grid, 20.0 * k)] == doctest::Approx(3.0));
    for (int k = -2; k < 2; ++k)
      CHECK(p.alpha[bin_of(grid, 20.0 * k + 10.0)] ==
            doctest::Approx(0.05).epsilon(1e-6));
    CHECK(p.alpha[bin_of(grid, 70.0)] == 3.0); // outside the sweep
  }
  SUBCASE("strong pumping saturates at the floor") {
    const std::vector<double> amps(10, 5.0);
    const auto p = prep_sequence_to_comb(100.0, 100.0, 100, amps, 3.0,
                                         BleachingModel{10.0, 0.2}, grid);
    CHECK(p.alpha[bin_of(grid, 0.0)] == doctest::Approx(0.2));
  }
}

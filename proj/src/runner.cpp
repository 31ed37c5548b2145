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

#include "afcmem/runner.hpp"

#include "afcmem/error.hpp"

#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace afcmem::runner {
namespace {

using Json = nlohmann::ordered_json;
constexpr double kPi = std::numbers::pi;

comb::CombSpec crystal_comb(const comb::CombSpec &spec,
                            const CrystalConfig &crystal) {
  comb::CombSpec c = spec;
  c.peak_optical_depth *= crystal.depth_scale;
  c.background_depth *= crystal.depth_scale;
  return c;
}

// H and V transfer functions of one crystal. The V transition sees the same
// comb scaled by the residual depth fraction.
std::pair<comb::TransferFunction, comb::TransferFunction>
crystal_transfer(const ExperimentConfig &cfg, const CrystalConfig &crystal) {
  const auto alpha_h = comb::build_absorption_profile(
      crystal_comb(cfg.comb, crystal), cfg.grid);
  std::vector<double> alpha_v(alpha_h);
  for (double &a : alpha_v)
    a *= cfg.chain.residual_v_fraction;
  return {comb::transfer_from_profile(alpha_h, cfg.grid),
          comb::transfer_from_profile(alpha_v, cfg.grid)};
}

double wrap_degrees(double deg) {
  double w = std::fmod(deg, 360.0);
  if (w <= -180.0)
    w += 360.0;
  else if (w > 180.0)
    w -= 360.0;
  return w;
}

double chain_fidelity(polar::DeviceChain chain, double theta_deg) {
  chain.phase_plate_deg = theta_deg;
  return polar::pure_process_fidelity(polar::echo_channel_matrix(chain));
}

double null_angle(const polar::DeviceChain &chain) {
  double best_theta = 0.0;
  double best = -1.0;
  for (int i = -179; i <= 180; ++i) {
    const double f = chain_fidelity(chain, i);
    if (f > best) {
      best = f;
      best_theta = i;
    }
  }
  const auto [theta, value] = boost::math::tools::brent_find_minima(
      [&](double t) { return -chain_fidelity(chain, t); }, best_theta - 1.0,
      best_theta + 1.0, std::numeric_limits<double>::digits / 2);
  (void)value;
  return wrap_degrees(theta);
}

// Normalised Gaussian blur of a sampled trace.
std::vector<double> blur(const std::vector<double> &x, double sigma_ns,
                         double dt_ns) {
  if (sigma_ns <= 0)
    return x;
  const auto half = static_cast<long>(std::ceil(5.0 * sigma_ns / dt_ns));
  std::vector<double> kernel;
  double norm = 0.0;
  for (long i = -half; i <= half; ++i) {
    const double t = static_cast<double>(i) * dt_ns / sigma_ns;
    kernel.push_back(std::exp(-0.5 * t * t));
    norm += kernel.back();
  }
  for (double &k : kernel)
    k /= norm;
  const auto n = static_cast<long>(x.size());
  std::vector<double> y(x.size(), 0.0);
  for (long j = 0; j < n; ++j) {
    double acc = 0.0;
    for (long i = -half; i <= half; ++i) {
      const long src = j - i;
      if (src >= 0 && src < n)
        acc += kernel[static_cast<std::size_t>(i + half)] *
               x[static_cast<std::size_t>(src)];
    }
    y[static_cast<std::size_t>(j)] = acc;
  }
  return y;
}

comb::EchoReport device_echoes(const ExperimentConfig &cfg,
                               const DeviceModel &device) {
  const auto out = propagate_device(device, polar::states::d());
  return comb::extract_echoes(out.intensity_envelope(), device.pulse.energy(),
                              cfg.comb.tooth_spacing_mhz, cfg.echo.n_echoes,
                              cfg.echo.gate_ns);
}

double first_echo(const comb::EchoReport &report) {
  if (report.echoes.empty())
    fail(ErrorKind::config_invalid,
         "time window too short to contain the first echo", "grid.n_points");
  return report.echoes.front().efficiency;
}

Json matrix_json(const tomo::Matrix4 &m, bool imag) {
  Json rows = Json::array();
  for (int r = 0; r < 4; ++r) {
    Json row = Json::array();
    for (int c = 0; c < 4; ++c)
      row.push_back(imag ? m(r, c).imag() : m(r, c).real());
    rows.push_back(row);
  }
  return rows;
}

Table chi_table(const std::string &name, const tomo::ChiMatrix &chi) {
  Table t{name, {"row", "col", "re", "im"}, {}};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      t.rows.push_back({static_cast<double>(r), static_cast<double>(c),
                        chi.values(r, c).real(), chi.values(r, c).imag()});
  return t;
}

Json jones_json(const polar::JonesMatrix &m) {
  Json rows = Json::array();
  for (int r = 0; r < 2; ++r) {
    Json row = Json::array();
    for (int c = 0; c < 2; ++c)
      row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

RunReport new_report(const std::string &experiment,
                     const ExperimentConfig &cfg) {
  RunReport r;
  r.experiment = experiment;
  r.config_hash = config_hash(cfg);
  r.seed = cfg.seed;
  r.version = version_string();
  r.results = Json::object();
  return r;
}

DeviceModel build_unnulled(const ExperimentConfig &cfg, double theta_deg) {
  cfg.validate();
  DeviceModel m;
  m.grid = cfg.grid;
  m.pulse = comb::gaussian_pulse(cfg.grid, cfg.pulse.fwhm_ns, cfg.pulse.t0_ns);
  std::tie(m.crystal1_h, m.crystal1_v) =
      crystal_transfer(cfg, cfg.chain.crystal1);
  std::tie(m.crystal2_h, m.crystal2_v) =
      crystal_transfer(cfg, cfg.chain.crystal2);
  m.retardance1_rad =
      polar::crystal_retardance(cfg.chain.crystal1.length_mm,
                                cfg.chain.birefringence,
                                cfg.chain.wavelength_nm);
  m.retardance2_rad =
      polar::crystal_retardance(cfg.chain.crystal2.length_mm,
                                cfg.chain.birefringence,
                                cfg.chain.wavelength_nm);
  const double spacing = cfg.comb.tooth_spacing_mhz;
  m.chain.crystal1 =
      polar::memory_element(m.crystal1_h, m.crystal1_v, m.pulse, spacing)
          .with_retardance(m.retardance1_rad);
  m.chain.crystal2 =
      polar::memory_element(m.crystal2_h, m.crystal2_v, m.pulse, spacing)
          .with_retardance(m.retardance2_rad);
  m.chain.hwp3_deg = cfg.chain.hwp3_deg;
  m.chain.hwp4_deg = cfg.chain.hwp4_deg;
  m.chain.phase_plate_deg = theta_deg;
  return m;
}

} // namespace

DeviceModel build_device(const ExperimentConfig &cfg, double phase_plate_deg) {
  return build_unnulled(cfg, phase_plate_deg);
}

DeviceModel build_device(const ExperimentConfig &cfg) {
  auto m = build_unnulled(cfg, cfg.chain.phase_plate_deg);
  if (cfg.chain.auto_null)
    m.chain.phase_plate_deg = null_angle(m.chain);
  return m;
}

comb::PulseWaveform PolarizedWaveform::intensity_envelope() const {
  comb::PulseWaveform out{h.t0_ns, h.dt_ns,
                          std::vector<comb::Complex>(h.size())};
  for (std::size_t j = 0; j < h.size(); ++j)
    out.envelope[j] =
        std::sqrt(std::norm(h.envelope[j]) + std::norm(v.envelope[j]));
  return out;
}

PolarizedWaveform propagate_device(const DeviceModel &device,
                                   const polar::JonesVector &input) {
  // Validates sampling and spectral leakage of the probe once.
  (void)comb::propagate_pulse(device.pulse, device.crystal1_h);

  const auto spec = comb::spectrum(device.pulse);
  const auto &c = device.chain;
  const polar::JonesMatrix hwp3 =
      polar::waveplate(polar::PlateKind::half, c.hwp3_deg);
  const polar::JonesMatrix out_optics =
      polar::waveplate(polar::PlateKind::half, c.hwp4_deg) *
      polar::phase_plate(c.phase_plate_deg);
  const comb::Complex r1 = std::polar(1.0, device.retardance1_rad);
  const comb::Complex r2 = std::polar(1.0, device.retardance2_rad);

  std::vector<comb::Complex> spec_h(spec.size()), spec_v(spec.size());
  for (std::size_t k = 0; k < spec.size(); ++k) {
    polar::JonesMatrix c1 = polar::JonesMatrix::Zero();
    polar::JonesMatrix c2 = polar::JonesMatrix::Zero();
    c1(0, 0) = device.crystal1_h.amplitude[k] * r1;
    c1(1, 1) = device.crystal1_v.amplitude[k];
    c2(0, 0) = device.crystal2_h.amplitude[k] * r2;
    c2(1, 1) = device.crystal2_v.amplitude[k];
    const polar::JonesVector out = out_optics * c2 * hwp3 * c1 * input;
    spec_h[k] = out(0) * spec[k];
    spec_v[k] = out(1) * spec[k];
  }
  return {comb::from_spectrum(device.pulse, spec_h),
          comb::from_spectrum(device.pulse, spec_v)};
}

double device_efficiency(const ExperimentConfig &cfg) {
  // Unitary output optics do not change the intensity, so no nulling here.
  const auto device = build_device(cfg, cfg.chain.phase_plate_deg);
  return first_echo(device_echoes(cfg, device));
}

RunReport run_echo_trace(const ExperimentConfig &cfg) {
  const auto device = build_device(cfg);
  const auto out = propagate_device(device, polar::states::d());
  const auto intensity_wave = out.intensity_envelope();
  const double e_in = device.pulse.energy();
  const auto echoes =
      comb::extract_echoes(intensity_wave, e_in, cfg.comb.tooth_spacing_mhz,
                           cfg.echo.n_echoes, cfg.echo.gate_ns);
  const double eta1 = first_echo(echoes);

  std::vector<double> intensity(intensity_wave.size());
  for (std::size_t j = 0; j < intensity.size(); ++j)
    intensity[j] = std::norm(intensity_wave.envelope[j]);
  const auto detected = blur(intensity, cfg.echo.jitter_ns, cfg.grid.dt_ns());

  const double trials = static_cast<double>(cfg.tomography.trials_per_setting);
  const double dt = cfg.grid.dt_ns();
  const double photons = cfg.noise.mean_photon_number *
                         cfg.noise.detection_efficiency *
                         cfg.noise.path_transmission * trials * dt / e_in;
  const double dark = cfg.noise.dark_prob_per_gate * dt / cfg.echo.gate_ns *
                      trials;

  auto report = new_report("echo", cfg);
  Table trace{"echo_trace", {"time_ns", "counts_per_bin"}, {}};
  for (std::size_t j = 0; j < detected.size(); ++j)
    trace.rows.push_back(
        {intensity_wave.time_ns(j), photons * detected[j] + dark});
  report.tables.push_back(std::move(trace));

  Json echo_list = Json::array();
  for (const auto &e : echoes.echoes)
    echo_list.push_back({{"order", e.order},
                         {"center_time_ns", e.center_time_ns},
                         {"efficiency", e.efficiency}});
  auto &r = report.results;
  r["storage_time_ns"] = cfg.comb.storage_time_ns();
  r["finesse"] = cfg.comb.finesse();
  r["eta1"] = eta1;
  r["transmitted_fraction"] = echoes.transmitted_fraction;
  r["total_echo_efficiency"] = echoes.total_echo_efficiency();
  r["echoes"] = echo_list;
  r["phase_plate_deg"] = device.chain.phase_plate_deg;
  r["trials"] = cfg.tomography.trials_per_setting;
  r["jitter_ns"] = cfg.echo.jitter_ns;
  return report;
}

RunReport run_qpt(const ExperimentConfig &cfg, int threads) {
  const auto device = build_device(cfg);
  const auto jones = polar::echo_channel_matrix(device.chain);
  const double eta1 = first_echo(device_echoes(cfg, device));

  const tomo::NoiseModel noise{cfg.noise.mean_photon_number,
                               eta1,
                               cfg.noise.detection_efficiency,
                               cfg.noise.path_transmission,
                               cfg.noise.dark_prob_per_gate,
                               cfg.echo.gate_ns};
  const auto pure = tomo::chi_from_kraus(jones);
  const auto model = tomo::channel_from_jones(jones, noise);
  const auto target = tomo::ChiMatrix::identity();

  const auto data = tomo::simulate_counts(
      pure, noise, cfg.tomography.trials_per_setting,
      derive_seed(cfg.seed, streams::counts));
  const auto linear = tomo::linear_inversion_chi(data);
  const auto mle =
      tomo::mle_chi(data, cfg.tomography.mle_tol, cfg.tomography.mle_max_iter);
  const auto boot = tomo::bootstrap_fidelity(
      data, cfg.tomography.bootstrap_resamples,
      derive_seed(cfg.seed, streams::bootstrap), target,
      cfg.tomography.mle_tol, cfg.tomography.mle_max_iter, threads);

  const double f_p = tomo::process_fidelity(mle.chi, target);
  const double f_avg = tomo::average_fidelity(f_p);
  const double f_lin = tomo::process_fidelity(linear, target);
  const double rate = cfg.timing.trials_per_second();
  const double settings = static_cast<double>(tomo::kInputs.size() *
                                              tomo::kBases.size());

  auto report = new_report("qpt", cfg);
  auto &r = report.results;
  r["estimator"] = "mle";
  r["chi_real"] = matrix_json(mle.chi.values, false);
  r["chi_imag"] = matrix_json(mle.chi.values, true);
  r["f_p"] = f_p;
  r["f_p_std"] = boot.std;
  r["f_p_bootstrap_mean"] = boot.mean;
  r["f_avg"] = f_avg;
  r["classical_bound"] = 2.0 / 3.0;
  r["bound_margin"] = f_avg - 2.0 / 3.0;
  r["max_abs_imag"] = mle.chi.max_abs_imag();
  r["mle_iterations"] = mle.iterations;
  r["mle_converged"] = mle.converged;
  r["bootstrap_resamples"] = cfg.tomography.bootstrap_resamples;
  r["bootstrap_unconverged"] = boot.unconverged;
  r["linear_inversion"] = {
      {"chi_real", matrix_json(linear.values, false)},
      {"chi_imag", matrix_json(linear.values, true)},
      {"f_p", f_lin},
      {"f_avg", (2.0 * f_lin + 1.0) / 3.0},
      {"max_abs_imag", linear.max_abs_imag()},
      {"min_eigenvalue", linear.min_eigenvalue()}};
  r["model"] = {{"f_p", tomo::process_fidelity(model, target)},
                {"pure_f_p", polar::pure_process_fidelity(jones)},
                {"depolarizing_fraction", noise.depolarizing_fraction()},
                {"signal_probability", noise.signal_probability()},
                {"memory_efficiency", eta1},
                {"echo_jones", jones_json(jones)}};
  r["phase_plate_deg"] = device.chain.phase_plate_deg;
  r["trials_per_setting"] = cfg.tomography.trials_per_setting;
  r["trials_per_second"] = rate;
  r["integration_time_s"] =
      settings * static_cast<double>(cfg.tomography.trials_per_setting) / rate;

  report.tables.push_back(chi_table("chi", mle.chi));
  report.tables.push_back(chi_table("chi_linear", linear));
  report.raw_csv.emplace_back("counts", tomo::to_csv(data));
  return report;
}

RunReport run_efficiency_curve(const ExperimentConfig &cfg,
                               const std::vector<double> &storage_times_ns) {
  cfg.validate();
  const double gamma = cfg.comb.tooth_fwhm_mhz;
  auto report = new_report("efficiency", cfg);
  Table curve{"efficiency_curve",
              {"storage_time_ns", "efficiency", "finesse",
               "single_crystal_efficiency"},
              {}};
  Json points = Json::array();
  for (double tau : storage_times_ns) {
    if (!(tau > 0))
      fail(ErrorKind::config_invalid, "storage times must be > 0",
           "efficiency.storage_times_ns");
    ExperimentConfig c = cfg;
    c.comb.tooth_spacing_mhz = 1000.0 / tau;
    const double finesse = c.comb.finesse();
    if (finesse < 1.0)
      fail(ErrorKind::config_invalid,
           fmt::format("storage time {} ns needs finesse {} < 1 at the "
                       "configured tooth width",
                       tau, finesse),
           "efficiency.storage_times_ns");
    c.echo.gate_ns = std::min(cfg.echo.gate_ns, 0.5 * tau);
    c.echo.n_echoes = 1;
    const double eta = device_efficiency(c);

    const auto device = build_device(c, c.chain.phase_plate_deg);
    const auto single = comb::propagate_pulse(device.pulse, device.crystal1_h);
    const double eta_single = first_echo(
        comb::extract_echoes(single, device.pulse.energy(),
                             c.comb.tooth_spacing_mhz, 1, c.echo.gate_ns));

    curve.rows.push_back({tau, eta, finesse, eta_single});
    Json p = {{"storage_time_ns", tau},
              {"efficiency", eta},
              {"finesse", finesse},
              {"single_crystal_efficiency", eta_single}};
    if (c.comb.tooth_shape == comb::ToothShape::gaussian && finesse >= 2.0) {
      comb::CombSpec spec = crystal_comb(c.comb, c.chain.crystal1);
      p["analytic_efficiency"] = comb::analytic_efficiency(spec);
    } else {
      p["analytic_efficiency"] = nullptr;
    }
    points.push_back(p);
  }
  report.results["tooth_fwhm_mhz"] = gamma;
  report.results["points"] = points;
  report.tables.push_back(std::move(curve));
  return report;
}

RunReport run_oracle(const ExperimentConfig &cfg, int threads) {
  cfg.validate();
  const auto cmp = ensemble::oracle_vs_transfer(
      cfg.comb, cfg.grid, cfg.pulse.fwhm_ns, cfg.pulse.t0_ns,
      cfg.oracle.n_atoms, derive_seed(cfg.seed, streams::oracle), threads);
  auto report = new_report("oracle", cfg);
  auto &r = report.results;
  r["finesse"] = cfg.comb.finesse();
  r["n_atoms"] = cfg.oracle.n_atoms;
  r["expected_time_ns"] = cmp.expected_time_ns;
  r["time_step_ns"] = cmp.time_step_ns;
  r["oracle_peak_time_ns"] = cmp.oracle_peak_time_ns;
  r["transfer_echo_time_ns"] = cmp.transfer_echo_time_ns;
  r["oracle_intensity_at_echo"] = cmp.oracle_intensity_at_echo;
  r["oracle_standard_error"] = cmp.oracle_standard_error;
  r["analytic_factor"] = cmp.analytic_factor;
  r["transfer_dephasing_factor"] = cmp.transfer_dephasing_factor;
  r["factor_ratio"] = cmp.factor_ratio;
  Table trace{"emission_trace", {"time_ns", "intensity"}, {}};
  for (std::size_t i = 0; i < cmp.trace.times_ns.size(); ++i)
    trace.rows.push_back({cmp.trace.times_ns[i], cmp.trace.intensity[i]});
  report.tables.push_back(std::move(trace));
  return report;
}

NullResult auto_null_phase_plate(const ExperimentConfig &cfg) {
  const auto device = build_device(cfg, cfg.chain.phase_plate_deg);
  NullResult res;
  res.fidelity_before =
      chain_fidelity(device.chain, cfg.chain.phase_plate_deg);
  res.theta_deg = null_angle(device.chain);
  res.fidelity_after = chain_fidelity(device.chain, res.theta_deg);
  return res;
}

RunReport run_null_phase(const ExperimentConfig &cfg) {
  const auto res = auto_null_phase_plate(cfg);
  const double r1 = polar::crystal_retardance(cfg.chain.crystal1.length_mm,
                                              cfg.chain.birefringence,
                                              cfg.chain.wavelength_nm);
  const double r2 = polar::crystal_retardance(cfg.chain.crystal2.length_mm,
                                              cfg.chain.birefringence,
                                              cfg.chain.wavelength_nm);
  auto report = new_report("null-phase", cfg);
  auto &r = report.results;
  r["theta_deg"] = res.theta_deg;
  r["configured_theta_deg"] = cfg.chain.phase_plate_deg;
  r["fidelity_before"] = res.fidelity_before;
  r["fidelity_after"] = res.fidelity_after;
  r["retardance_mismatch_deg"] =
      wrap_degrees((r1 - r2) * 180.0 / kPi);
  return report;
}

CalibrationResult calibrate(const ExperimentConfig &base,
                            const CalibrationTargets &targets) {
  base.validate();
  const double spacing_short = 1000.0 / targets.short_storage_ns;
  const double spacing_long = 1000.0 / targets.long_storage_ns;

  // Dark rate from the short-storage fidelity, then the long-storage
  // efficiency that gives the long-storage fidelity at that dark rate.
  tomo::NoiseModel noise{base.noise.mean_photon_number,
                         targets.efficiency_short,
                         base.noise.detection_efficiency,
                         base.noise.path_transmission,
                         0.0,
                         base.echo.gate_ns};
  const auto lambda = [](double f_p) { return 4.0 * (1.0 - f_p) / 3.0; };
  const double l_short = lambda(targets.fidelity_short);
  const double l_long = lambda(targets.fidelity_long);
  const double s_short = noise.signal_probability();
  const double dark = l_short * s_short / (1.0 - l_short);
  const double s_long = dark * (1.0 - l_long) / l_long;
  const double per_photon = base.noise.mean_photon_number *
                            base.noise.detection_efficiency *
                            base.noise.path_transmission;
  const double eta_long_target = -std::log1p(-s_long) / per_photon;

  const auto eta = [&](double d, double gamma, double spacing) {
    ExperimentConfig c = base;
    c.comb.peak_optical_depth = d;
    c.comb.tooth_fwhm_mhz = gamma;
    c.comb.tooth_spacing_mhz = spacing;
    c.echo.n_echoes = 1;
    c.echo.gate_ns = std::min(base.echo.gate_ns, 0.5 * 1000.0 / spacing);
    return device_efficiency(c);
  };

  boost::math::tools::eps_tolerance<double> tol(40);
  // Low-depth branch: efficiency rises with d up to d ~ 2F.
  const auto depth_for = [&](double finesse) {
    const double gamma = spacing_short / finesse;
    const auto g = [&](double d) {
      return eta(d, gamma, spacing_short) - targets.efficiency_short;
    };
    double hi = 2.0 * finesse;
    if (g(hi) < 0)
      fail(ErrorKind::invalid_argument,
           "short-storage efficiency target unreachable at finesse " +
               std::to_string(finesse));
    std::uintmax_t iters = 100;
    const auto [a, b] =
        boost::math::tools::toms748_solve(g, 1e-3, hi, tol, iters);
    return 0.5 * (a + b);
  };
  const auto long_mismatch = [&](double finesse) {
    const double d = depth_for(finesse);
    return eta(d, spacing_short / finesse, spacing_long) - eta_long_target;
  };

  const double res = base.grid.resolution_mhz();
  // The long-storage comb must keep a finesse above one.
  const double f_lo = std::max(2.0, 1.01 * spacing_short / spacing_long);
  const double f_hi = std::min(8.0, spacing_short / (10.0 * res) * 0.999);
  if (!(f_hi > f_lo) || long_mismatch(f_lo) * long_mismatch(f_hi) > 0)
    fail(ErrorKind::invalid_argument,
         "long-storage efficiency target is not bracketed by finesse in [2, " +
             std::to_string(f_hi) + "]");
  std::uintmax_t iters = 100;
  const auto [fa, fb] = boost::math::tools::toms748_solve(
      long_mismatch, f_lo, f_hi, tol, iters);
  const double finesse = 0.5 * (fa + fb);

  CalibrationResult out;
  out.finesse_short = finesse;
  out.tooth_fwhm_mhz = spacing_short / finesse;
  out.peak_optical_depth = depth_for(finesse);
  out.dark_prob_per_gate = dark;
  out.efficiency_short =
      eta(out.peak_optical_depth, out.tooth_fwhm_mhz, spacing_short);
  out.efficiency_long =
      eta(out.peak_optical_depth, out.tooth_fwhm_mhz, spacing_long);
  out.efficiency_long_target = eta_long_target;
  return out;
}

RunReport run_calibration(const ExperimentConfig &cfg) {
  const auto res = calibrate(cfg);
  auto report = new_report("calibrate", cfg);
  auto &r = report.results;
  r["peak_optical_depth"] = res.peak_optical_depth;
  r["tooth_fwhm_mhz"] = res.tooth_fwhm_mhz;
  r["finesse_short"] = res.finesse_short;
  r["dark_prob_per_gate"] = res.dark_prob_per_gate;
  r["efficiency_short"] = res.efficiency_short;
  r["efficiency_long"] = res.efficiency_long;
  r["efficiency_long_target"] = res.efficiency_long_target;
  return report;
}

} // namespace afcmem::runner

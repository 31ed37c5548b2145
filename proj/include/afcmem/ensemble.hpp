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

// Brute-force discrete-atom model of the comb: N two-level atoms at detunings
// drawn from the comb density, each contributing a phasor exp(-i 2 pi d_j t).
// Thin medium, first order; no propagation or reabsorption.

#include "afcmem/comb.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace afcmem::ensemble {

struct AtomEnsemble {
  std::vector<double> detunings_mhz;
  std::vector<double> weights; // sum to 1
  double dephase_sigma_rad = 0.0;

  std::size_t size() const { return detunings_mhz.size(); }
};

struct EmissionTrace {
  std::vector<double> times_ns;
  std::vector<double> intensity;
};

// Detunings follow max(alpha - d0, 0): a tooth is picked uniformly, then the
// offset from the tooth shape truncated to half a period.
AtomEnsemble sample_atoms(const comb::CombSpec &spec, std::size_t n_atoms,
                          std::uint64_t seed, double dephase_sigma_rad = 0.0);

// |sum_j w_j exp(-i 2 pi d_j t + i theta_j)|^2 with theta_j ~ N(0, sigma^2)
// drawn once per call from `seed`.
EmissionTrace collective_intensity(const AtomEnsemble &atoms,
                                   std::span<const double> times_ns,
                                   std::uint64_t seed, int threads = 1);

// Intensity at a single time plus its delta-method standard error.
struct IntensityEstimate {
  double intensity = 0.0;
  double standard_error = 0.0;
};
IntensityEstimate intensity_at(const AtomEnsemble &atoms, double time_ns,
                               std::uint64_t seed);

// Exact rephasing factor |E exp(-i 2 pi x / D)|^2 for an untruncated
// gaussian tooth: exp(-pi^2 / (2 ln2 F^2)).
double gaussian_rephasing_factor(double finesse);

struct OracleComparison {
  double expected_time_ns = 0.0;     // 1/D
  double time_step_ns = 0.0;         // shared grid step
  double oracle_peak_time_ns = 0.0;  // argmax of |A|^2 near 1/D
  double transfer_echo_time_ns = 0.0; // first-echo centroid, TF engine
  double oracle_intensity_at_echo = 0.0; // |A(1/D)|^2
  double oracle_standard_error = 0.0;
  double analytic_factor = 0.0;          // exp(-7/F^2)
  double transfer_dephasing_factor = 0.0; // A1^2 / mean^2 from the TF echo
  double factor_ratio = 0.0;             // oracle / transfer
  EmissionTrace trace;
};

OracleComparison oracle_vs_transfer(const comb::CombSpec &spec,
                                    const comb::SpectralGrid &grid,
                                    double pulse_fwhm_ns, double pulse_t0_ns,
                                    std::size_t n_atoms, std::uint64_t seed,
                                    int threads = 1);

} // namespace afcmem::ensemble

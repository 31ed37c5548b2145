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

// Jones calculus for the two-crystal memory: wave plates, the
// crystal / HWP / crystal sandwich, compensation optics and the
// QWP-HWP-Wollaston analyser. Basis order is (H, V).

#include "afcmem/comb.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>

namespace afcmem::polar {

using Complex = std::complex<double>;
using JonesVector = Eigen::Vector2cd;
using JonesMatrix = Eigen::Matrix2cd;

enum class PlateKind { half, quarter };

// Retarder with retardance pi (half) or pi/2 (quarter) and fast axis at
// `angle_deg` from H: R(a) diag(1, e^{i delta}) R(-a).
JonesMatrix waveplate(PlateKind kind, double angle_deg);
JonesMatrix retarder(double retardance_rad, double angle_deg);

// diag(e^{i theta}, 1); the compensation plate in front of HWP4.
JonesMatrix phase_plate(double theta_deg);

// One crystal as seen by a pulse: prompt (pass) and first-echo amplitudes
// for each lab polarization.
struct MemoryElement {
  Complex pass_h{1.0, 0.0};
  Complex pass_v{1.0, 0.0};
  Complex echo_h{0.0, 0.0};
  Complex echo_v{0.0, 0.0};

  JonesMatrix pass() const;
  JonesMatrix echo() const;
  // Static birefringent phase exp(i phi) on the H amplitudes.
  MemoryElement with_retardance(double phase_rad) const;
};

// Birefringent phase 2 pi dn L / lambda of a crystal.
double crystal_retardance(double length_mm, double birefringence,
                          double wavelength_nm);

// Amplitudes of a crystal from the transfer functions of its H and V
// transitions, probed with `pulse`. The echo is read at 1/D, the prompt part
// at 0, each over a window of one period.
MemoryElement memory_element(const comb::TransferFunction &tf_h,
                             const comb::TransferFunction &tf_v,
                             const comb::PulseWaveform &pulse,
                             double spacing_mhz);

// Crystal1 -> HWP3 -> Crystal2 -> phase plate -> HWP4, in that order.
struct DeviceChain {
  MemoryElement crystal1;
  MemoryElement crystal2;
  double hwp3_deg = 45.0;
  double phase_plate_deg = 0.0;
  double hwp4_deg = 45.0;
};

// First-echo window: HWP4 PP (E2 HWP3 P1 + P2 HWP3 E1).
JonesMatrix echo_channel_matrix(const DeviceChain &chain);
// Prompt window: HWP4 PP P2 HWP3 P1.
JonesMatrix transmitted_channel_matrix(const DeviceChain &chain);

// |Tr M|^2 / (2 Tr M^dag M): process fidelity of the pure channel M to the
// identity.
double pure_process_fidelity(const JonesMatrix &m);

enum class Port { plus, minus };

struct AnalyzerSetting {
  double qwp_deg = 0.0;
  double hwp_deg = 0.0;
};

// Canonical settings realising Z, X and Y measurements; the + port then
// projects on H, D and R respectively.
AnalyzerSetting z_setting();
AnalyzerSetting x_setting();
AnalyzerSetting y_setting();

// Probability of a click at the Wollaston `port` after QWP2(q), HWP5(h).
double analyze_port(const JonesVector &state, double qwp_deg, double hwp_deg,
                    Port port);

// Pure state the analyser maps onto `port`.
JonesVector analyzer_projector(double qwp_deg, double hwp_deg, Port port);

namespace states {
JonesVector h();
JonesVector v();
JonesVector d();
JonesVector a();
JonesVector r();
JonesVector l();
} // namespace states

} // namespace afcmem::polar

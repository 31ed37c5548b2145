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

#include "afcmem/polar.hpp"

#include <cmath>
#include <numbers>

namespace afcmem::polar {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

JonesMatrix rotation(double angle_rad) {
  const double c = std::cos(angle_rad);
  const double s = std::sin(angle_rad);
  JonesMatrix r;
  r << c, -s, s, c;
  return r;
}

JonesMatrix diag(Complex a, Complex b) {
  JonesMatrix m;
  m << a, 0.0, 0.0, b;
  return m;
}

} // namespace

JonesMatrix retarder(double retardance_rad, double angle_deg) {
  const JonesMatrix r = rotation(angle_deg * kDeg);
  return r * diag(1.0, std::polar(1.0, retardance_rad)) * r.transpose();
}

JonesMatrix waveplate(PlateKind kind, double angle_deg) {
  return retarder(kind == PlateKind::half ? kPi : 0.5 * kPi, angle_deg);
}

JonesMatrix phase_plate(double theta_deg) {
  return diag(std::polar(1.0, theta_deg * kDeg), 1.0);
}

JonesMatrix MemoryElement::pass() const { return diag(pass_h, pass_v); }
JonesMatrix MemoryElement::echo() const { return diag(echo_h, echo_v); }

MemoryElement MemoryElement::with_retardance(double phase_rad) const {
  const Complex p = std::polar(1.0, phase_rad);
  return MemoryElement{pass_h * p, pass_v, echo_h * p, echo_v};
}

double crystal_retardance(double length_mm, double birefringence,
                          double wavelength_nm) {
  return 2.0 * kPi * birefringence * (length_mm * 1e6) / wavelength_nm;
}

MemoryElement memory_element(const comb::TransferFunction &tf_h,
                             const comb::TransferFunction &tf_v,
                             const comb::PulseWaveform &pulse,
                             double spacing_mhz) {
  const double period = 1000.0 / spacing_mhz;
  const auto out_h = comb::propagate_pulse(pulse, tf_h);
  const auto out_v = comb::propagate_pulse(pulse, tf_v);
  MemoryElement m;
  m.pass_h = comb::gated_amplitude(out_h, pulse, 0.0, period);
  m.pass_v = comb::gated_amplitude(out_v, pulse, 0.0, period);
  m.echo_h = comb::gated_amplitude(out_h, pulse, period, period);
  m.echo_v = comb::gated_amplitude(out_v, pulse, period, period);
  return m;
}

JonesMatrix echo_channel_matrix(const DeviceChain &chain) {
  const JonesMatrix swap3 = waveplate(PlateKind::half, chain.hwp3_deg);
  const JonesMatrix out = waveplate(PlateKind::half, chain.hwp4_deg) *
                          phase_plate(chain.phase_plate_deg);
  return out * (chain.crystal2.echo() * swap3 * chain.crystal1.pass() +
                chain.crystal2.pass() * swap3 * chain.crystal1.echo());
}

JonesMatrix transmitted_channel_matrix(const DeviceChain &chain) {
  return waveplate(PlateKind::half, chain.hwp4_deg) *
         phase_plate(chain.phase_plate_deg) * chain.crystal2.pass() *
         waveplate(PlateKind::half, chain.hwp3_deg) * chain.crystal1.pass();
}

double pure_process_fidelity(const JonesMatrix &m) {
  const double norm = (m.adjoint() * m).trace().real();
  if (norm <= 0)
    return 0.0;
  return std::norm(m.trace()) / (2.0 * norm);
}

AnalyzerSetting z_setting() { return {0.0, 0.0}; }
AnalyzerSetting x_setting() { return {45.0, 22.5}; }
AnalyzerSetting y_setting() { return {0.0, -22.5}; }

JonesVector analyzer_projector(double qwp_deg, double hwp_deg, Port port) {
  const JonesMatrix u = waveplate(PlateKind::half, hwp_deg) *
                        waveplate(PlateKind::quarter, qwp_deg);
  JonesVector basis = port == Port::plus ? states::h() : states::v();
  return u.adjoint() * basis;
}

double analyze_port(const JonesVector &state, double qwp_deg, double hwp_deg,
                    Port port) {
  return std::norm(analyzer_projector(qwp_deg, hwp_deg, port).dot(state));
}

namespace states {
namespace {
const double kS = 1.0 / std::numbers::sqrt2;
JonesVector make(Complex a, Complex b) {
  JonesVector v;
  v << a, b;
  return v;
}
} // namespace
JonesVector h() { return make(1.0, 0.0); }
JonesVector v() { return make(0.0, 1.0); }
JonesVector d() { return make(kS, kS); }
JonesVector a() { return make(kS, -kS); }
JonesVector r() { return make(kS, Complex(0.0, kS)); }
JonesVector l() { return make(kS, Complex(0.0, -kS)); }
} // namespace states

} // namespace afcmem::polar

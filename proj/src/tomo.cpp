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

#include "afcmem/tomo.hpp"

#include "afcmem/error.hpp"
#include "afcmem/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

namespace afcmem::tomo {
namespace {

// Columns are vec(s_m) with vec(A)[2i + a] = A(a, i).
const Matrix4 &pauli_columns() {
  static const Matrix4 b = [] {
    Matrix4 m;
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 2; ++i)
        for (int a = 0; a < 2; ++a)
          m(2 * i + a, k) = pauli(k)(a, i);
    return m;
  }();
  return b;
}

} // namespace

void validate_density(const DensityMatrix &rho) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    fail(ErrorKind::invalid_argument, "density matrix is not Hermitian");
  if (std::abs(rho.trace() - Complex(1.0)) > 1e-12)
    fail(ErrorKind::invalid_argument, "density matrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<Matrix2> es(rho);
  if (es.eigenvalues().minCoeff() < -1e-10)
    fail(ErrorKind::invalid_argument, "density matrix is not positive");
}

const Matrix2 &pauli(int index) {
  static const std::array<Matrix2, 4> p = [] {
    std::array<Matrix2, 4> out;
    const Complex i(0.0, 1.0);
    out[0] << 1.0, 0.0, 0.0, 1.0;
    out[1] << 0.0, 1.0, 1.0, 0.0;
    out[2] << 0.0, -i, i, 0.0;
    out[3] << 1.0, 0.0, 0.0, -1.0;
    return out;
  }();
  return p.at(static_cast<std::size_t>(index));
}

ChiMatrix ChiMatrix::identity() {
  ChiMatrix chi;
  chi.values(0, 0) = 1.0;
  return chi;
}

ChiMatrix ChiMatrix::depolarizing() {
  ChiMatrix chi;
  chi.values = Matrix4::Identity() * 0.25;
  return chi;
}

double ChiMatrix::hermiticity_error() const {
  return (values - values.adjoint()).cwiseAbs().maxCoeff();
}

double ChiMatrix::min_eigenvalue() const {
  const Matrix4 h = 0.5 * (values + values.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4> es(h);
  return es.eigenvalues().minCoeff();
}

double ChiMatrix::tp_error() const {
  Matrix2 sum = Matrix2::Zero();
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n)
      sum += values(m, n) * pauli(n).adjoint() * pauli(m);
  return (sum - Matrix2::Identity()).cwiseAbs().maxCoeff();
}

double ChiMatrix::max_abs_imag() const {
  return values.imag().cwiseAbs().maxCoeff();
}

Matrix4 chi_to_choi(const ChiMatrix &chi) {
  const Matrix4 &b = pauli_columns();
  return b * chi.values * b.adjoint();
}

ChiMatrix choi_to_chi(const Matrix4 &choi) {
  const Matrix4 &b = pauli_columns();
  ChiMatrix chi;
  chi.values = b.adjoint() * choi * b / 4.0;
  return chi;
}

Matrix2 apply_channel(const ChiMatrix &chi, const Matrix2 &rho) {
  Matrix2 out = Matrix2::Zero();
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n)
      if (chi(m, n) != Complex(0.0))
        out += chi(m, n) * pauli(m) * rho * pauli(n).adjoint();
  return out;
}

ChiMatrix chi_from_kraus(const Matrix2 &m) {
  Eigen::Vector4cd coeff;
  for (int k = 0; k < 4; ++k)
    coeff(k) = (pauli(k) * m).trace() / 2.0;
  const double norm = coeff.squaredNorm();
  if (!(norm > 1e-300))
    fail(ErrorKind::zero_matrix, "channel Jones matrix is zero");
  ChiMatrix chi;
  chi.values = coeff * coeff.adjoint() / norm;
  return chi;
}

double NoiseModel::signal_probability() const {
  return -std::expm1(-mean_photon_number * memory_efficiency *
                     detection_efficiency * path_transmission);
}

double NoiseModel::depolarizing_fraction() const {
  const double s = signal_probability();
  const double total = s + dark_prob_per_gate;
  return total > 0 ? dark_prob_per_gate / total : 0.0;
}

void NoiseModel::validate(const std::string &prefix) const {
  const auto unit = [&](double v, const char *name) {
    if (!(v >= 0.0 && v <= 1.0))
      fail(ErrorKind::config_invalid, "must lie in [0, 1]",
           prefix + "." + name);
  };
  if (!(mean_photon_number > 0) || !std::isfinite(mean_photon_number))
    fail(ErrorKind::config_invalid, "must be > 0",
         prefix + ".mean_photon_number");
  unit(memory_efficiency, "memory_efficiency");
  unit(detection_efficiency, "detection_efficiency");
  unit(path_transmission, "path_transmission");
  unit(dark_prob_per_gate, "dark_prob_per_gate");
  if (!(gate_ns > 0) || !std::isfinite(gate_ns))
    fail(ErrorKind::config_invalid, "must be > 0", prefix + ".gate_ns");
}

ChiMatrix channel_from_jones(const Matrix2 &jones, const NoiseModel &noise) {
  const ChiMatrix pure = chi_from_kraus(jones);
  const double lambda = noise.depolarizing_fraction();
  ChiMatrix chi;
  chi.values = (1.0 - lambda) * pure.values +
               lambda * ChiMatrix::depolarizing().values;
  return chi;
}

const char *to_string(InputState s) {
  static constexpr const char *names[] = {"H", "V", "D", "A", "R", "L"};
  return names[static_cast<int>(s)];
}

const char *to_string(Basis b) {
  static constexpr const char *names[] = {"Z", "X", "Y"};
  return names[static_cast<int>(b)];
}

const char *to_string(Port p) { return p == Port::plus ? "+" : "-"; }

DensityMatrix input_density(InputState s) {
  using namespace polar::states;
  polar::JonesVector v;
  switch (s) {
  case InputState::H:
    v = h();
    break;
  case InputState::V:
    v = polar::states::v();
    break;
  case InputState::D:
    v = d();
    break;
  case InputState::A:
    v = a();
    break;
  case InputState::R:
    v = r();
    break;
  case InputState::L:
    v = l();
    break;
  }
  return v * v.adjoint();
}

Matrix2 measurement_projector(Basis basis, Port port) {
  polar::AnalyzerSetting s;
  switch (basis) {
  case Basis::Z:
    s = polar::z_setting();
    break;
  case Basis::X:
    s = polar::x_setting();
    break;
  case Basis::Y:
    s = polar::y_setting();
    break;
  }
  const auto v = polar::analyzer_projector(s.qwp_deg, s.hwp_deg, port);
  return v * v.adjoint();
}

std::size_t cell_index(InputState s, Basis b, Port p) {
  return (static_cast<std::size_t>(s) * 3 + static_cast<std::size_t>(b)) * 2 +
         (p == Port::plus ? 0 : 1);
}

TomographyDataset TomographyDataset::empty(std::uint64_t trials) {
  TomographyDataset data;
  for (auto s : kInputs)
    for (auto b : kBases)
      for (auto p : kPorts)
        data.at(s, b, p) = TomographyCell{s, b, p, trials, 0};
  return data;
}

void TomographyDataset::validate() const {
  for (auto s : kInputs)
    for (auto b : kBases)
      for (auto p : kPorts) {
        const auto &c = at(s, b, p);
        if (c.input != s || c.setting != b || c.port != p)
          fail(ErrorKind::invalid_argument, "dataset cells out of order");
        if (c.clicks > c.trials)
          fail(ErrorKind::invalid_argument,
               std::string("clicks exceed trials for ") + to_string(s) + "/" +
                   to_string(b) + "/" + to_string(p));
      }
  for (auto s : kInputs)
    for (auto b : kBases)
      if (at(s, b, Port::plus).trials != at(s, b, Port::minus).trials)
        fail(ErrorKind::invalid_argument,
             "ports of one setting must share a trial count");
}

CellValues click_probabilities(const ChiMatrix &chi, const NoiseModel &noise) {
  const double signal = noise.signal_probability();
  const double dark = 0.5 * noise.dark_prob_per_gate;
  CellValues p{};
  for (auto s : kInputs) {
    const Matrix2 out = apply_channel(chi, input_density(s));
    for (auto b : kBases)
      for (auto port : kPorts) {
        const double q =
            (measurement_projector(b, port) * out).trace().real();
        p[cell_index(s, b, port)] =
            std::clamp(signal * q + dark, 0.0, 1.0);
      }
  }
  return p;
}

TomographyDataset simulate_counts(const ChiMatrix &chi, const NoiseModel &noise,
                                  std::uint64_t trials_per_setting,
                                  std::uint64_t seed) {
  if (trials_per_setting < 1)
    fail(ErrorKind::invalid_argument, "need at least one trial per setting",
         "tomography.trials_per_setting");
  const auto p = click_probabilities(chi, noise);
  auto data = TomographyDataset::empty(trials_per_setting);
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < kCells; ++k) {
    std::binomial_distribution<std::uint64_t> draw(trials_per_setting, p[k]);
    data.cells[k].clicks = draw(rng);
  }
  return data;
}

CellValues click_frequencies(const TomographyDataset &data) {
  CellValues f{};
  for (std::size_t k = 0; k < kCells; ++k)
    f[k] = data.cells[k].trials > 0
               ? static_cast<double>(data.cells[k].clicks) /
                     static_cast<double>(data.cells[k].trials)
               : 0.0;
  return f;
}

ChiMatrix linear_inversion_chi(const TomographyDataset &data) {
  data.validate();
  for (const auto &c : data.cells)
    if (c.trials == 0)
      fail(ErrorKind::invalid_argument, "every cell needs trials > 0");
  return linear_inversion_chi(click_frequencies(data));
}

ChiMatrix linear_inversion_chi(const CellValues &freq,
                               const std::array<InputState, 4> &inputs) {
  // Output state per input from the three Stokes parameters.
  std::array<Matrix2, 4> outputs;
  Matrix4 gram;
  for (int k = 0; k < 4; ++k) {
    Matrix2 rho = pauli(0);
    for (int b = 0; b < 3; ++b) {
      const auto basis = kBases[static_cast<std::size_t>(b)];
      const double plus = freq[cell_index(inputs[k], basis, Port::plus)];
      const double minus = freq[cell_index(inputs[k], basis, Port::minus)];
      const double stokes =
          plus + minus > 0 ? (plus - minus) / (plus + minus) : 0.0;
      // Z -> pauli 3, X -> pauli 1, Y -> pauli 2.
      const int idx = basis == Basis::Z ? 3 : (basis == Basis::X ? 1 : 2);
      rho += stokes * pauli(idx);
    }
    outputs[static_cast<std::size_t>(k)] = 0.5 * rho;
    const Matrix2 in = input_density(inputs[static_cast<std::size_t>(k)]);
    for (int i = 0; i < 2; ++i)
      for (int a = 0; a < 2; ++a)
        gram(2 * i + a, k) = in(a, i);
  }

  Eigen::FullPivLU<Matrix4> lu(gram);
  if (std::abs(lu.determinant()) < 1e-10)
    fail(ErrorKind::singular_system,
         "input states do not span the operator space");

  Matrix4 choi = Matrix4::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Eigen::Vector4cd target = Eigen::Vector4cd::Zero();
      target(2 * j + i) = 1.0; // vec(|i><j|)
      const Eigen::Vector4cd c = lu.solve(target);
      Matrix2 image = Matrix2::Zero();
      for (int k = 0; k < 4; ++k)
        image += c(k) * outputs[static_cast<std::size_t>(k)];
      choi.block<2, 2>(2 * i, 2 * j) = image;
    }
  ChiMatrix chi = choi_to_chi(choi);
  chi.values = 0.5 * (chi.values + chi.values.adjoint()).eval();
  return chi;
}

double process_fidelity(const ChiMatrix &chi, const ChiMatrix &target) {
  const double purity = (target.values * target.values).trace().real();
  if (std::abs(purity - 1.0) > 1e-9 || std::abs(target.trace() - 1.0) > 1e-9)
    fail(ErrorKind::non_pure_target, "target process must be pure");
  return (target.values * chi.values).trace().real();
}

double average_fidelity(double fp) {
  if (!(fp >= 0.0 && fp <= 1.0))
    fail(ErrorKind::invalid_argument, "process fidelity must lie in [0, 1]");
  return (2.0 * fp + 1.0) / 3.0;
}

BootstrapResult bootstrap_fidelity(const TomographyDataset &data,
                                   int n_resamples, std::uint64_t seed,
                                   const ChiMatrix &target, double tol,
                                   int max_iter, int threads) {
  if (n_resamples < 100)
    fail(ErrorKind::invalid_argument, "bootstrap needs >= 100 resamples",
         "tomography.bootstrap_resamples");
  data.validate();

  BootstrapResult result;
  result.samples.assign(static_cast<std::size_t>(n_resamples), 0.0);
  std::vector<char> converged(static_cast<std::size_t>(n_resamples), 1);
  parallel_for(static_cast<std::size_t>(n_resamples), threads,
               [&](std::size_t r) {
                 std::mt19937_64 rng(seed + r);
                 TomographyDataset resample = data;
                 for (auto &cell : resample.cells) {
                   const double p =
                       cell.trials > 0
                           ? static_cast<double>(cell.clicks) /
                                 static_cast<double>(cell.trials)
                           : 0.0;
                   std::binomial_distribution<std::uint64_t> draw(cell.trials,
                                                                  p);
                   cell.clicks = draw(rng);
                 }
                 const auto fit = mle_chi(resample, tol, max_iter);
                 converged[r] = fit.converged ? 1 : 0;
                 result.samples[r] = process_fidelity(fit.chi, target);
               });

  double sum = 0.0;
  for (double f : result.samples)
    sum += f;
  result.mean = sum / n_resamples;
  double ss = 0.0;
  for (double f : result.samples)
    ss += (f - result.mean) * (f - result.mean);
  result.std = std::sqrt(ss / (n_resamples - 1));
  result.unconverged = static_cast<int>(
      std::count(converged.begin(), converged.end(), 0));
  return result;
}

} // namespace afcmem::tomo

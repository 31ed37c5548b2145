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

// Qubit process tomography of the memory: channel construction from the
// device Jones map, click simulation, linear inversion and maximum-likelihood
// reconstruction of the process matrix chi in the {I, X, Y, Z} basis,
//   E(rho) = sum_mn chi_mn s_m rho s_n^dag.

#include "afcmem/polar.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace afcmem::tomo {

using Complex = std::complex<double>;
using Matrix2 = Eigen::Matrix2cd;
using Matrix4 = Eigen::Matrix4cd;
using DensityMatrix = Matrix2;
using polar::Port;

// Throws invalid_argument unless rho is Hermitian, unit trace (1e-12) and
// has eigenvalues >= -1e-10.
void validate_density(const DensityMatrix &rho);

const Matrix2 &pauli(int index); // 0..3 -> I, X, Y, Z

struct ChiMatrix {
  Matrix4 values = Matrix4::Zero();

  static ChiMatrix identity();
  static ChiMatrix depolarizing();

  Complex operator()(int m, int n) const { return values(m, n); }
  double trace() const { return values.trace().real(); }
  double hermiticity_error() const;
  double min_eigenvalue() const;
  // max |sum_mn chi_mn s_n^dag s_m - I|
  double tp_error() const;
  double max_abs_imag() const;
};

// Choi matrix J = sum_ij |i><j| (x) E(|i><j|) (input factor first).
Matrix4 chi_to_choi(const ChiMatrix &chi);
ChiMatrix choi_to_chi(const Matrix4 &choi);

Matrix2 apply_channel(const ChiMatrix &chi, const Matrix2 &rho);

// m_k = Tr(s_k M)/2 and chi = m m^dag / (m^dag m). Throws zero_matrix.
ChiMatrix chi_from_kraus(const Matrix2 &m);

struct NoiseModel {
  double mean_photon_number = 0.8;
  double memory_efficiency = 0.069;
  double detection_efficiency = 0.4;
  double path_transmission = 0.6;
  double dark_prob_per_gate = 5e-6; // summed over both analyser ports
  double gate_ns = 50.0;

  // Threshold-detector click probability of the retrieved pulse,
  // 1 - exp(-mu eta_mem eta_det eta_path).
  double signal_probability() const;
  // Dark fraction of post-selected clicks, dark / (dark + signal).
  double depolarizing_fraction() const;

  void validate(const std::string &prefix = "noise") const;
};

// Post-selected channel: (1 - l) chi_pure + l I/4-type depolarizing part.
ChiMatrix channel_from_jones(const Matrix2 &jones, const NoiseModel &noise);

enum class InputState { H, V, D, A, R, L };
enum class Basis { Z, X, Y };

inline constexpr std::array<InputState, 6> kInputs = {
    InputState::H, InputState::V, InputState::D,
    InputState::A, InputState::R, InputState::L};
inline constexpr std::array<Basis, 3> kBases = {Basis::Z, Basis::X, Basis::Y};
inline constexpr std::array<Port, 2> kPorts = {Port::plus, Port::minus};
inline constexpr std::size_t kCells = 36;

const char *to_string(InputState s);
const char *to_string(Basis b);
const char *to_string(Port p);

DensityMatrix input_density(InputState s);
// Projector realised by the analyser at `basis`, `port`.
Matrix2 measurement_projector(Basis basis, Port port);

// Flat cell index: (input * 3 + basis) * 2 + port.
std::size_t cell_index(InputState s, Basis b, Port p);

struct TomographyCell {
  InputState input = InputState::H;
  Basis setting = Basis::Z;
  Port port = Port::plus;
  std::uint64_t trials = 0;
  std::uint64_t clicks = 0;

  bool operator==(const TomographyCell &) const = default;
};

struct TomographyDataset {
  std::array<TomographyCell, kCells> cells;

  static TomographyDataset empty(std::uint64_t trials);
  TomographyCell &at(InputState s, Basis b, Port p) {
    return cells[cell_index(s, b, p)];
  }
  const TomographyCell &at(InputState s, Basis b, Port p) const {
    return cells[cell_index(s, b, p)];
  }
  // clicks <= trials; cells ordered; paired ports share a trial count.
  void validate() const;

  bool operator==(const TomographyDataset &) const = default;
};

std::string to_csv(const TomographyDataset &data);
TomographyDataset dataset_from_csv(const std::string &text);
std::string to_csv(const ChiMatrix &chi);
ChiMatrix chi_from_csv(const std::string &text);

using CellValues = std::array<double, kCells>;

// signal * Tr(Pi E(rho)) + dark/2 for every cell.
CellValues click_probabilities(const ChiMatrix &chi, const NoiseModel &noise);

// clicks ~ Binomial(trials, p) per cell, cells drawn in index order from one
// mt19937_64 seeded with `seed`.
TomographyDataset simulate_counts(const ChiMatrix &chi, const NoiseModel &noise,
                                  std::uint64_t trials_per_setting,
                                  std::uint64_t seed);

CellValues click_frequencies(const TomographyDataset &data);

// Stokes estimates of the output for four inputs followed by the linear map
// to chi. The default input set is {H, V, D, R}.
ChiMatrix linear_inversion_chi(const TomographyDataset &data);
ChiMatrix linear_inversion_chi(
    const CellValues &frequencies,
    const std::array<InputState, 4> &inputs = {InputState::H, InputState::V,
                                               InputState::D, InputState::R});

struct MleResult {
  ChiMatrix chi;
  int iterations = 0;
  bool converged = false;
  std::vector<double> log_likelihood; // one entry per accepted iterate
};

// Post-selected log likelihood sum_k c_k log Tr(Pi_k E(rho_k)).
double log_likelihood(const ChiMatrix &chi, const CellValues &counts);

// Diluted R-J-R iteration on the Choi matrix with trace-preserving
// renormalisation. `counts` may be non-integer (e.g. exact probabilities).
MleResult mle_chi(const CellValues &counts, double tol, int max_iter);
MleResult mle_chi(const TomographyDataset &data, double tol, int max_iter);

// Tr(chi_target chi); target must be pure (throws non_pure_target).
double process_fidelity(const ChiMatrix &chi, const ChiMatrix &target);
// (2 F_p + 1) / 3
double average_fidelity(double process_fidelity);

struct BootstrapResult {
  double mean = 0.0;
  double std = 0.0;
  std::vector<double> samples;
  int unconverged = 0;
};

// Parametric bootstrap. Resample r draws every cell from
// Binomial(trials, clicks/trials) with an mt19937_64 seeded `seed + r`.
BootstrapResult bootstrap_fidelity(const TomographyDataset &data,
                                   int n_resamples, std::uint64_t seed,
                                   const ChiMatrix &target, double tol,
                                   int max_iter, int threads = 1);

} // namespace afcmem::tomo

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

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace afcmem::tomo {
namespace {

// Probability operators on the Choi space: q_k = Tr(J (rho_k^T (x) Pi_k)).
struct Operators {
  std::array<Matrix4, kCells> cell;
  std::array<Matrix2, kCells> input_transposed;
};

const Operators &operators() {
  static const Operators ops = [] {
    Operators o;
    for (auto s : kInputs)
      for (auto b : kBases)
        for (auto p : kPorts) {
          const auto k = cell_index(s, b, p);
          const Matrix2 in_t = input_density(s).transpose();
          const Matrix2 proj = measurement_projector(b, p);
          Matrix4 m;
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
              m.block<2, 2>(2 * i, 2 * j) = in_t(i, j) * proj;
          o.cell[k] = m;
          o.input_transposed[k] = in_t;
        }
    return o;
  }();
  return ops;
}

constexpr double kTiny = 1e-300;

double probability(const Matrix4 &choi, std::size_t k) {
  return (choi * operators().cell[k]).trace().real();
}

double likelihood_of(const Matrix4 &choi, const CellValues &counts) {
  double sum = 0.0;
  for (std::size_t k = 0; k < kCells; ++k) {
    if (counts[k] <= 0)
      continue;
    const double q = probability(choi, k);
    if (!(q > kTiny))
      return -std::numeric_limits<double>::infinity();
    sum += counts[k] * std::log(q);
  }
  return sum;
}

Matrix2 partial_trace_output(const Matrix4 &m) {
  Matrix2 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out(i, j) = m(2 * i, 2 * j) + m(2 * i + 1, 2 * j + 1);
  return out;
}

Matrix2 inverse_sqrt(const Matrix2 &h) {
  Eigen::SelfAdjointEigenSolver<Matrix2> es(0.5 * (h + h.adjoint()));
  Eigen::Vector2d ev = es.eigenvalues();
  for (int i = 0; i < 2; ++i)
    ev(i) = ev(i) > kTiny ? 1.0 / std::sqrt(ev(i)) : 0.0;
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix4 kron_identity(const Matrix2 &a) {
  Matrix4 out = Matrix4::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      out(2 * i, 2 * j) = a(i, j);
      out(2 * i + 1, 2 * j + 1) = a(i, j);
    }
  return out;
}

// One R J R step with dilution eps, renormalised to be trace preserving.
Matrix4 step(const Matrix4 &choi, const Matrix4 &r, const Matrix4 &neutral,
             double eps) {
  const Matrix4 re = (1.0 - eps) * neutral + eps * r;
  Matrix4 next = re * choi * re;
  const Matrix4 norm = kron_identity(inverse_sqrt(partial_trace_output(next)));
  next = norm * next * norm;
  return 0.5 * (next + next.adjoint());
}

} // namespace

double log_likelihood(const ChiMatrix &chi, const CellValues &counts) {
  return likelihood_of(chi_to_choi(chi), counts);
}

MleResult mle_chi(const TomographyDataset &data, double tol, int max_iter) {
  data.validate();
  CellValues counts{};
  for (std::size_t k = 0; k < kCells; ++k)
    counts[k] = static_cast<double>(data.cells[k].clicks);
  return mle_chi(counts, tol, max_iter);
}

MleResult mle_chi(const CellValues &counts, double tol, int max_iter) {
  if (!(tol > 0) || max_iter < 1)
    fail(ErrorKind::invalid_argument, "MLE needs tol > 0 and max_iter >= 1");
  for (double c : counts)
    if (!(c >= 0) || !std::isfinite(c))
      fail(ErrorKind::invalid_argument, "counts must be finite and >= 0");

  const auto &ops = operators();
  // Completely depolarizing start: full rank and trace preserving.
  Matrix4 choi = 0.5 * Matrix4::Identity();
  double current = likelihood_of(choi, counts);

  MleResult result;
  result.log_likelihood.push_back(current);

  // Fixed point of the iteration for exactly fitted data: K (x) I with
  // K = sum over settings of (pair total) rho^T.
  Matrix2 k_op = Matrix2::Zero();
  for (std::size_t k = 0; k < kCells; ++k)
    k_op += counts[k] * ops.input_transposed[k];
  const Matrix4 neutral = kron_identity(k_op);

  double total = 0.0;
  for (double c : counts)
    total += c;
  if (total <= 0) {
    result.chi = choi_to_chi(choi);
    result.converged = true;
    return result;
  }

  double eps = 1.0;
  for (int it = 0; it < max_iter; ++it) {
    Matrix4 r = Matrix4::Zero();
    for (std::size_t k = 0; k < kCells; ++k) {
      if (counts[k] <= 0)
        continue;
      r += (counts[k] / std::max(probability(choi, k), kTiny)) * ops.cell[k];
    }

    bool accepted = false;
    Matrix4 candidate;
    double next = current;
    for (int halvings = 0; halvings < 40; ++halvings) {
      candidate = step(choi, r, neutral, eps);
      next = likelihood_of(candidate, counts);
      if (next >= current) {
        accepted = true;
        break;
      }
      eps *= 0.5;
    }
    result.iterations = it + 1;
    if (!accepted) {
      // No ascent direction left at machine precision.
      result.converged = true;
      break;
    }
    const double gain = next - current;
    choi = candidate;
    current = next;
    result.log_likelihood.push_back(current);
    if (gain <= tol * std::max(1.0, std::abs(current))) {
      result.converged = true;
      break;
    }
    eps = std::min(eps * 2.0, 8.0);
  }

  result.chi = choi_to_chi(choi);
  result.chi.values = 0.5 * (result.chi.values + result.chi.values.adjoint()).eval();
  return result;
}

} // namespace afcmem::tomo

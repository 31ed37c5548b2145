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

#include "afcmem/error.hpp"
#include "afcmem/tomo.hpp"

#include <doctest.h>

#include <Eigen/QR>

#include <cmath>
#include <random>

using namespace afcmem;
using namespace afcmem::tomo;

namespace {

Matrix2 random_unitary(std::mt19937_64 &rng) {
  std::normal_distribution<double> g;
  Matrix2 a;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      a(i, j) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<Matrix2> qr(a);
  return qr.householderQ();
}

// Random CPTP channel from a Stinespring unitary on qubit + qutrit ancilla.
ChiMatrix random_channel(std::mt19937_64 &rng) {
  std::normal_distribution<double> g;
  Eigen::Matrix<Complex, 6, 6> a;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      a(i, j) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<Eigen::Matrix<Complex, 6, 6>> qr(a);
  const Eigen::Matrix<Complex, 6, 6> u = qr.householderQ();
  Matrix4 choi = Matrix4::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      // E(|i><j|) = sum_k K_k |i><j| K_k^dag, K_k = rows 2k..2k+1, cols 0..1
      Matrix2 out = Matrix2::Zero();
      for (int k = 0; k < 3; ++k) {
        const Matrix2 kk = u.block<2, 2>(2 * k, 0);
        Matrix2 e = Matrix2::Zero();
        e(i, j) = 1.0;
        out += kk * e * kk.adjoint();
      }
      choi.block<2, 2>(2 * i, 2 * j) = out;
    }
  return choi_to_chi(choi);
}

CellValues exact_probabilities(const ChiMatrix &chi) {
  CellValues q{};
  for (auto s : kInputs)
    for (auto b : kBases)
      for (auto p : kPorts)
        q[cell_index(s, b, p)] =
            (measurement_projector(b, p) * apply_channel(chi, input_density(s)))
                .trace()
                .real();
  return q;
}

double frobenius(const ChiMatrix &a, const ChiMatrix &b) {
  return (a.values - b.values).norm();
}

NoiseModel quiet_noise() {
  NoiseModel n;
  n.dark_prob_per_gate = 0.0;
  return n;
}

} // namespace

TEST_CASE("density matrices and projectors") {
  for (auto s : kInputs)
    CHECK_NOTHROW(validate_density(input_density(s)));
  Matrix2 bad = Matrix2::Identity();
  CHECK_THROWS_AS(validate_density(bad), Error);
  for (auto b : kBases) {
    const Matrix2 sum = measurement_projector(b, Port::plus) +
                        measurement_projector(b, Port::minus);
    CHECK((sum - Matrix2::Identity()).norm() < 1e-12);
  }
  CHECK((measurement_projector(Basis::Z, Port::plus) - input_density(InputState::H))
            .norm() < 1e-12);
  CHECK((measurement_projector(Basis::X, Port::plus) - input_density(InputState::D))
            .norm() < 1e-12);
  CHECK((measurement_projector(Basis::Y, Port::plus) - input_density(InputState::R))
            .norm() < 1e-12);
}

TEST_CASE("chi and choi representations agree") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto chi = random_channel(rng);
    CHECK(chi.hermiticity_error() < 1e-12);
    CHECK(chi.tp_error() < 1e-12);
    CHECK(chi.min_eigenvalue() > -1e-12);
    CHECK(chi.trace() == doctest::Approx(1.0).epsilon(1e-12));
    const auto back = choi_to_chi(chi_to_choi(chi));
    CHECK(frobenius(back, chi) < 1e-12);
  }
}

TEST_CASE("channel_from_jones examples") {
  const auto id = channel_from_jones(Matrix2::Identity(), quiet_noise());
  CHECK(frobenius(id, ChiMatrix::identity()) < 1e-15);

  NoiseModel dark;
  dark.memory_efficiency = 0.0;
  dark.dark_prob_per_gate = 1e-3;
  const auto depol = channel_from_jones(Matrix2::Identity(), dark);
  CHECK(frobenius(depol, ChiMatrix::depolarizing()) < 1e-15);

  NoiseModel defaults;
  CHECK(defaults.signal_probability() ==
        doctest::Approx(1.0 - std::exp(-0.8 * 0.069 * 0.4 * 0.6)).epsilon(1e-14));
  CHECK(defaults.signal_probability() == doctest::Approx(0.01316).epsilon(1e-3));

  CHECK_THROWS_AS(chi_from_kraus(Matrix2::Zero()), Error);
}

TEST_CASE("fidelity conversions") {
  CHECK(average_fidelity(1.0) == 1.0);
  CHECK(average_fidelity(0.5) == 2.0 / 3.0);
  CHECK(average_fidelity(0.998) == doctest::Approx(0.998666666666667));
  CHECK_THROWS_AS(average_fidelity(1.5), Error);

  const auto target = ChiMatrix::identity();
  CHECK(process_fidelity(target, target) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(process_fidelity(target, ChiMatrix::depolarizing()), Error);
  try {
    process_fidelity(target, ChiMatrix::depolarizing());
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::non_pure_target);
  }
}

TEST_CASE("property: depolarizing admixture gives F_p = 1 - 3 lambda / 4") {
  for (double lambda : {0.0, 0.01, 0.1, 0.5, 1.0}) {
    ChiMatrix chi;
    chi.values = (1.0 - lambda) * ChiMatrix::identity().values +
                 lambda * ChiMatrix::depolarizing().values;
    CHECK(process_fidelity(chi, ChiMatrix::identity()) ==
          doctest::Approx(1.0 - 0.75 * lambda).epsilon(1e-15));
  }
}

TEST_CASE("pure Jones channel fidelity matches the closed form") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int i = 0; i < 30; ++i) {
    Matrix2 m;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        m(r, c) = Complex(g(rng), g(rng));
    const double closed = polar::pure_process_fidelity(m);
    const double pipeline =
        process_fidelity(chi_from_kraus(m), ChiMatrix::identity());
    CHECK(std::abs(closed - pipeline) < 1e-10);
  }
}

TEST_CASE("simulate_counts examples") {
  const auto data = simulate_counts(ChiMatrix::identity(), quiet_noise(), 100000, 1);
  CHECK_NOTHROW(data.validate());
  CHECK(data.at(InputState::H, Basis::Z, Port::minus).clicks == 0);
  CHECK(data.at(InputState::H, Basis::Z, Port::plus).clicks > 0);

  NoiseModel noise;
  const auto depol = simulate_counts(ChiMatrix::depolarizing(), noise, 1000000, 2);
  for (auto s : kInputs)
    for (auto b : kBases) {
      const double p = static_cast<double>(depol.at(s, b, Port::plus).clicks);
      const double m = static_cast<double>(depol.at(s, b, Port::minus).clicks);
      CHECK(std::abs(p - m) < 5.0 * std::sqrt(p + m));
    }
  CHECK(simulate_counts(ChiMatrix::identity(), noise, 5000, 9) ==
        simulate_counts(ChiMatrix::identity(), noise, 5000, 9));
  CHECK_THROWS_AS(simulate_counts(ChiMatrix::identity(), noise, 0, 9), Error);
}

TEST_CASE("dataset CSV round trip is bit-exact") {
  const auto data = simulate_counts(ChiMatrix::identity(), NoiseModel{}, 64000, 4);
  const auto text = to_csv(data);
  CHECK(text.rfind("input,setting,port,trials,clicks\n", 0) == 0);
  CHECK(dataset_from_csv(text) == data);
  CHECK(to_csv(dataset_from_csv(text)) == text);
  CHECK_THROWS_AS(dataset_from_csv("input,setting,port,trials,clicks\nH,Z,+,1,2\n"),
                  Error);
}

TEST_CASE("chi CSV round trip is bit-exact") {
  std::mt19937_64 rng(6);
  const auto chi = random_channel(rng);
  const auto text = to_csv(chi);
  CHECK(text.rfind("row,col,re,im\n", 0) == 0);
  const auto back = chi_from_csv(text);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      CHECK(back.values(r, c).real() == chi.values(r, c).real());
      CHECK(back.values(r, c).imag() == chi.values(r, c).imag());
    }
}

TEST_CASE("linear inversion recovers unitary channels from exact data") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    const auto chi = chi_from_kraus(random_unitary(rng));
    const auto est = linear_inversion_chi(exact_probabilities(chi));
    CHECK(frobenius(est, chi) < 1e-9);
  }
  const auto id = linear_inversion_chi(exact_probabilities(ChiMatrix::identity()));
  CHECK(frobenius(id, ChiMatrix::identity()) < 1e-10);
}

TEST_CASE("linear inversion needs independent inputs") {
  const auto q = exact_probabilities(ChiMatrix::identity());
  try {
    linear_inversion_chi(q, {InputState::H, InputState::V, InputState::H,
                             InputState::V});
    FAIL("expected singular-system");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::singular_system);
  }
}

TEST_CASE("linear inversion on finite counts: hermitian, trace one") {
  NoiseModel noise;
  noise.dark_prob_per_gate = 1e-4;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto data = simulate_counts(ChiMatrix::identity(), noise, 200000, seed);
    const auto est = linear_inversion_chi(data);
    CHECK(est.hermiticity_error() < 1e-12);
    CHECK(est.trace() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("MLE is CPTP with monotone likelihood on fuzzed datasets") {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<std::uint64_t> trials(0, 2000);
  for (int i = 0; i < 60; ++i) {
    auto data = TomographyDataset::empty(0);
    for (std::size_t pair = 0; pair < kCells; pair += 2) {
      const auto n = trials(rng) + 1;
      std::uniform_int_distribution<std::uint64_t> c(0, n);
      for (std::size_t k = pair; k < pair + 2; ++k) {
        data.cells[k].trials = n;
        data.cells[k].clicks = c(rng);
      }
    }
    const auto res = mle_chi(data, 1e-10, 2000);
    CHECK(res.chi.min_eigenvalue() > -1e-10);
    CHECK(res.chi.tp_error() < 1e-8);
    for (std::size_t k = 1; k < res.log_likelihood.size(); ++k)
      CHECK(res.log_likelihood[k] >= res.log_likelihood[k - 1]);
  }
}

TEST_CASE("MLE on an all-zero dataset returns a CPTP channel") {
  const auto res = mle_chi(TomographyDataset::empty(1000), 1e-10, 100);
  CHECK(res.chi.min_eigenvalue() > -1e-10);
  CHECK(res.chi.tp_error() < 1e-8);
  CHECK(frobenius(res.chi, ChiMatrix::depolarizing()) < 1e-12);
}

TEST_CASE("MLE is consistent at large trial counts") {
  std::mt19937_64 rng(21);
  const auto chi = random_channel(rng);
  const auto data = simulate_counts(chi, quiet_noise(), 100000000, 5);
  const auto res = mle_chi(data, 1e-12, 20000);
  CHECK(frobenius(res.chi, chi) < 1e-3);
}

TEST_CASE("MLE matches a physical linear inversion in likelihood") {
  std::mt19937_64 rng(22);
  const auto chi = random_channel(rng);
  const auto q = exact_probabilities(chi);
  CellValues counts{};
  for (std::size_t k = 0; k < kCells; ++k)
    counts[k] = 1e6 * q[k];
  const auto lin = linear_inversion_chi(q);
  REQUIRE(lin.min_eigenvalue() > -1e-9);
  const auto res = mle_chi(counts, 1e-14, 50000);
  const double l_lin = log_likelihood(lin, counts);
  const double l_mle = log_likelihood(res.chi, counts);
  CHECK(std::abs(l_mle - l_lin) <= 1e-6 * std::abs(l_lin));
}

TEST_CASE("bootstrap: determinism, threads and statistics") {
  NoiseModel noise;
  noise.dark_prob_per_gate = 3.5e-5;
  const auto data = simulate_counts(ChiMatrix::identity(), noise, 1000000, 31);
  const auto target = ChiMatrix::identity();
  const auto a = bootstrap_fidelity(data, 100, 77, target, 1e-10, 10000, 1);
  const auto b = bootstrap_fidelity(data, 100, 77, target, 1e-10, 10000, 3);
  CHECK(a.samples == b.samples);
  CHECK(a.mean == b.mean);
  CHECK(a.std > 0.0);
  CHECK(a.unconverged == 0);
  CHECK_THROWS_AS(bootstrap_fidelity(data, 50, 1, target, 1e-10, 100), Error);
}

TEST_CASE("bootstrap spread is negligible for noiseless huge data") {
  const auto data = simulate_counts(ChiMatrix::identity(), quiet_noise(),
                                    100000000, 3);
  const auto res =
      bootstrap_fidelity(data, 100, 5, ChiMatrix::identity(), 1e-10, 10000);
  CHECK(res.std < 1e-4);
}

TEST_CASE("bootstrap spread scales as trials^-1/2") {
  NoiseModel noise;
  noise.dark_prob_per_gate = 5e-4;
  const auto target = ChiMatrix::identity();
  const auto small = simulate_counts(target, noise, 100000, 1);
  const auto large = simulate_counts(target, noise, 10000000, 1);
  const auto s = bootstrap_fidelity(small, 200, 3, target, 1e-10, 20000);
  const auto l = bootstrap_fidelity(large, 200, 3, target, 1e-10, 20000);
  CHECK(s.std / l.std == doctest::Approx(10.0).epsilon(0.3));
}

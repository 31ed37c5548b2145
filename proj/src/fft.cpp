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

#include "fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace afcmem::detail {
namespace {

// Planner calls are not thread-safe in FFTW; execution is.
std::mutex planner_mutex;

std::vector<std::complex<double>> transform(
    std::span<const std::complex<double>> in, int sign) {
  const int n = static_cast<int>(in.size());
  std::vector<std::complex<double>> out(in.begin(), in.end());
  if (n == 0)
    return out;
  auto *buf = reinterpret_cast<fftw_complex *>(out.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex);
    plan = fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex);
    fftw_destroy_plan(plan);
  }
  return out;
}

} // namespace

std::vector<std::complex<double>> fft(
    std::span<const std::complex<double>> in) {
  return transform(in, FFTW_FORWARD);
}

std::vector<std::complex<double>> ifft(
    std::span<const std::complex<double>> in) {
  auto out = transform(in, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(out.size());
  for (auto &v : out)
    v *= scale;
  return out;
}

} // namespace afcmem::detail

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

#include "afcmem/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace afcmem {

int thread_budget() {
  const char *raw = std::getenv("AFC_MEMSIM_THREADS");
  if (raw == nullptr)
    return 1;
  try {
    const int n = std::stoi(raw);
    return std::max(1, n);
  } catch (const std::exception &) {
    return 1;
  }
}

void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)> &task) {
  const auto workers = static_cast<std::size_t>(
      std::clamp<long>(threads, 1, static_cast<long>(std::max<std::size_t>(n, 1))));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      task(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error)
            first_error = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (first_error)
    std::rethrow_exception(first_error);
}

} // namespace afcmem

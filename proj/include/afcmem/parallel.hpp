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

#include <cstddef>
#include <functional>

namespace afcmem {

// Worker cap from AFC_MEMSIM_THREADS; 1 when unset or unparsable.
int thread_budget();

// Runs task(i) for i in [0, n) on up to `threads` workers. Each index runs
// exactly once; callers reduce results in index order for reproducibility.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)> &task);

} // namespace afcmem

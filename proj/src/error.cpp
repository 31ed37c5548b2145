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

namespace afcmem {

const char *to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::config_invalid:
    return "config-invalid";
  case ErrorKind::grid_too_coarse:
    return "grid-too-coarse";
  case ErrorKind::spectral_leakage:
    return "spectral-leakage";
  case ErrorKind::overlapping_gates:
    return "overlapping-gates";
  case ErrorKind::unsupported_shape:
    return "unsupported-shape";
  case ErrorKind::empty_comb:
    return "empty-comb";
  case ErrorKind::zero_matrix:
    return "zero-matrix";
  case ErrorKind::singular_system:
    return "singular-system";
  case ErrorKind::non_pure_target:
    return "non-pure-target";
  case ErrorKind::invalid_argument:
    return "invalid-argument";
  case ErrorKind::io:
    return "io";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string &message, std::string field)
    : std::runtime_error(field.empty() ? message : field + ": " + message),
      kind_(kind), field_(std::move(field)), detail_(message) {}

void fail(ErrorKind kind, const std::string &message, std::string field) {
  throw Error(kind, message, std::move(field));
}

} // namespace afcmem

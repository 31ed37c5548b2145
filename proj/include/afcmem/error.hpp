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

#include <stdexcept>
#include <string>

namespace afcmem {

enum class ErrorKind {
  config_invalid,     // a configuration field violates its contract
  grid_too_coarse,
  spectral_leakage,
  overlapping_gates,
  unsupported_shape,
  empty_comb,
  zero_matrix,
  singular_system,
  non_pure_target,
  invalid_argument,
  io,
};

const char *to_string(ErrorKind kind);

// Raised by every module. `field()` carries the dotted config path when the
// failure can be pinned to one (e.g. "comb.tooth_fwhm_mhz").
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &message, std::string field = {});

  ErrorKind kind() const noexcept { return kind_; }
  const std::string &field() const noexcept { return field_; }
  // The message without the field prefix.
  const std::string &detail() const noexcept { return detail_; }

private:
  ErrorKind kind_;
  std::string field_;
  std::string detail_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string &message,
                       std::string field = {});

} // namespace afcmem

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

#include <fmt/format.h>

#include <array>
#include <charconv>
#include <cstdlib>
#include <sstream>

namespace afcmem::tomo {
namespace {

std::vector<std::string> split(const std::string &line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' '))
      field.pop_back();
    while (!field.empty() && field.front() == ' ')
      field.erase(field.begin());
    out.push_back(field);
  }
  return out;
}

std::uint64_t parse_count(const std::string &s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    fail(ErrorKind::io, "not a non-negative integer: '" + s + "'");
  return v;
}

double parse_real(const std::string &s) {
  char *end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    fail(ErrorKind::io, "not a number: '" + s + "'");
  return v;
}

template <typename E, std::size_t N>
E parse_enum(const std::string &s, const std::array<E, N> &values) {
  for (auto v : values)
    if (s == to_string(v))
      return v;
  fail(ErrorKind::io, "unknown label '" + s + "'");
}

} // namespace

std::string to_csv(const TomographyDataset &data) {
  std::string out = "input,setting,port,trials,clicks\n";
  for (const auto &c : data.cells)
    out += fmt::format("{},{},{},{},{}\n", to_string(c.input),
                       to_string(c.setting), to_string(c.port), c.trials,
                       c.clicks);
  return out;
}

TomographyDataset dataset_from_csv(const std::string &text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) ||
      split(line, ',') != std::vector<std::string>{"input", "setting", "port",
                                                   "trials", "clicks"})
    fail(ErrorKind::io, "dataset CSV must start with "
                        "'input,setting,port,trials,clicks'");
  TomographyDataset data;
  std::array<bool, kCells> seen{};
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r")
      continue;
    const auto f = split(line, ',');
    if (f.size() != 5)
      fail(ErrorKind::io, "dataset row needs 5 fields: '" + line + "'");
    const auto s = parse_enum(f[0], kInputs);
    const auto b = parse_enum(f[1], kBases);
    const auto p = parse_enum(f[2], kPorts);
    const auto k = cell_index(s, b, p);
    if (seen[k])
      fail(ErrorKind::io, "duplicate dataset cell '" + line + "'");
    seen[k] = true;
    data.cells[k] = TomographyCell{s, b, p, parse_count(f[3]),
                                   parse_count(f[4])};
  }
  for (bool s : seen)
    if (!s)
      fail(ErrorKind::io, "dataset CSV is missing cells (need all 36)");
  data.validate();
  return data;
}

std::string to_csv(const ChiMatrix &chi) {
  std::string out = "row,col,re,im\n";
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n)
      out += fmt::format("{},{},{},{}\n", m, n, chi(m, n).real(),
                         chi(m, n).imag());
  return out;
}

ChiMatrix chi_from_csv(const std::string &text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) ||
      split(line, ',') != std::vector<std::string>{"row", "col", "re", "im"})
    fail(ErrorKind::io, "chi CSV must start with 'row,col,re,im'");
  ChiMatrix chi;
  std::array<bool, 16> seen{};
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r")
      continue;
    const auto f = split(line, ',');
    if (f.size() != 4)
      fail(ErrorKind::io, "chi row needs 4 fields: '" + line + "'");
    const auto m = parse_count(f[0]);
    const auto n = parse_count(f[1]);
    if (m > 3 || n > 3)
      fail(ErrorKind::io, "chi index out of range: '" + line + "'");
    seen[m * 4 + n] = true;
    chi.values(static_cast<int>(m), static_cast<int>(n)) =
        Complex(parse_real(f[2]), parse_real(f[3]));
  }
  for (bool s : seen)
    if (!s)
      fail(ErrorKind::io, "chi CSV is missing entries (need all 16)");
  return chi;
}

} // namespace afcmem::tomo

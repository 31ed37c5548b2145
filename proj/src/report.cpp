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
#include "afcmem/runner.hpp"

#include <fmt/format.h>

#include <filesystem>
#include <fstream>

namespace afcmem::runner {
namespace {

void write_file(const std::filesystem::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out)
    fail(ErrorKind::io, "cannot write " + path.string(), "--out");
}

} // namespace

std::string version_string() { return AFCMEM_VERSION; }

std::string Table::to_csv() const {
  std::string text = fmt::format("{}\n", fmt::join(columns, ","));
  for (const auto &row : rows)
    text += fmt::format("{}\n", fmt::join(row, ","));
  return text;
}

nlohmann::ordered_json RunReport::to_json() const {
  nlohmann::ordered_json j;
  j["experiment"] = experiment;
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  j["results"] = results;
  if (!tables.empty()) {
    auto &t = j["results"]["tables"];
    for (const auto &table : tables)
      t[table.name] = {{"columns", table.columns}, {"rows", table.rows}};
  }
  j["version"] = version;
  return j;
}

std::string RunReport::json_text() const { return to_json().dump(2) + "\n"; }

const Table *RunReport::table(const std::string &name) const {
  for (const auto &t : tables)
    if (t.name == name)
      return &t;
  return nullptr;
}

void RunReport::write(const std::string &dir, const std::string &format) const {
  if (format != "json" && format != "csv")
    fail(ErrorKind::config_invalid, "must be csv or json", "--format");
  const std::filesystem::path root(dir.empty() ? "." : dir);
  std::error_code ec;
  std::filesystem::create_directories(root, ec);
  if (ec)
    fail(ErrorKind::io, "cannot create " + root.string() + ": " + ec.message(),
         "--out");
  if (format == "json") {
    write_file(root / (experiment + ".json"), json_text());
    return;
  }
  for (const auto &t : tables)
    write_file(root / (t.name + ".csv"), t.to_csv());
  for (const auto &[name, text] : raw_csv)
    write_file(root / (name + ".csv"), text);
}

} // namespace afcmem::runner

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

// Command-line front end. Talks to the simulator only through the C API.

#include "afcmem/afcmem.h"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <map>
#include <memory>
#include <optional>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::string out;
  std::string format = "json";
};

struct ConfigDeleter {
  void operator()(afcmem_config *c) const { afcmem_config_free(c); }
};
struct ReportDeleter {
  void operator()(afcmem_report *r) const { afcmem_report_free(r); }
};

int report_failure(afcmem_status status) {
  std::fprintf(stderr, "error: %s\n", afcmem_last_error());
  return status == AFCMEM_ERR_CONFIG ? kExitConfig : kExitRuntime;
}

int run(afcmem_experiment experiment, const Options &opt) {
  if (opt.config.empty()) {
    std::fprintf(stderr, "error: --config: required option is missing\n");
    return kExitConfig;
  }
  if (opt.format != "json" && opt.format != "csv") {
    std::fprintf(stderr, "error: --format: must be csv or json\n");
    return kExitConfig;
  }

  afcmem_config *raw_config = nullptr;
  if (auto s = afcmem_config_load(opt.config.c_str(), &raw_config))
    return report_failure(s);
  std::unique_ptr<afcmem_config, ConfigDeleter> config(raw_config);

  if (opt.seed)
    afcmem_config_set_seed(config.get(), *opt.seed);
  if (opt.trials)
    if (auto s = afcmem_config_set_trials(config.get(), *opt.trials))
      return report_failure(s);

  std::string out_dir = opt.out;
  if (out_dir.empty()) {
    const char *configured = nullptr;
    afcmem_config_output_dir(config.get(), &configured);
    out_dir = (configured && *configured) ? configured : ".";
  }

  afcmem_report *raw_report = nullptr;
  if (auto s = afcmem_run(config.get(), experiment, 0, &raw_report))
    return report_failure(s);
  std::unique_ptr<afcmem_report, ReportDeleter> report(raw_report);

  if (auto s = afcmem_report_write(report.get(), out_dir.c_str(),
                                   opt.format.c_str()))
    return report_failure(s);
  std::printf("wrote %s output to %s\n", opt.format.c_str(), out_dir.c_str());
  return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Atomic-frequency-comb polarization memory simulator"};
  app.set_version_flag("--version", std::string(afcmem_version()));
  app.require_subcommand(1);

  const std::map<std::string, std::pair<afcmem_experiment, const char *>>
      commands = {
          {"echo", {AFCMEM_ECHO, "Echo trace of the device"}},
          {"qpt", {AFCMEM_QPT, "Simulated process tomography"}},
          {"efficiency",
           {AFCMEM_EFFICIENCY, "First-echo efficiency versus storage time"}},
          {"oracle",
           {AFCMEM_ORACLE, "Discrete-atom cross-check of the echo"}},
          {"null-phase",
           {AFCMEM_NULL_PHASE, "Phase-plate angle that nulls the chain"}},
          {"calibrate",
           {AFCMEM_CALIBRATE, "Fit comb depth, finesse and dark rate"}},
      };

  Options opt;
  std::optional<afcmem_experiment> chosen;
  for (const auto &[name, entry] : commands) {
    auto *sub = app.add_subcommand(name, entry.second);
    sub->add_option("--config", opt.config,
                    "Config file or preset (paper_200ns, paper_500ns, ideal)");
    sub->add_option("--seed", opt.seed, "Override the config seed");
    sub->add_option("--out", opt.out, "Output directory");
    sub->add_option("--format", opt.format, "csv or json (default json)");
    sub->add_option("--trials", opt.trials, "Override trials per setting");
    const auto experiment = entry.first;
    sub->callback([&chosen, experiment] { chosen = experiment; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitConfig;
  }
  return run(*chosen, opt);
}

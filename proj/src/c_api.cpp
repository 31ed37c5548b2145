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

#include "afcmem/afcmem.h"

#include "afcmem/error.hpp"
#include "afcmem/parallel.hpp"
#include "afcmem/runner.hpp"

#include <charconv>
#include <exception>
#include <string>

struct afcmem_config {
  afcmem::runner::ExperimentConfig cfg;
  std::string scratch;
};

struct afcmem_report {
  afcmem::runner::RunReport report;
  std::string scratch;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_field;

afcmem_status record(afcmem_status status, const std::string &message,
                     const std::string &field = {}) {
  g_error = message;
  g_field = field;
  return status;
}

afcmem_status status_of(afcmem::ErrorKind kind) {
  switch (kind) {
  case afcmem::ErrorKind::config_invalid:
    return AFCMEM_ERR_CONFIG;
  default:
    return AFCMEM_ERR_RUNTIME;
  }
}

template <typename F> afcmem_status guarded(F &&body) {
  g_error.clear();
  g_field.clear();
  try {
    body();
    return AFCMEM_OK;
  } catch (const afcmem::Error &e) {
    return record(status_of(e.kind()), e.what(), e.field());
  } catch (const std::exception &e) {
    return record(AFCMEM_ERR_RUNTIME, e.what());
  } catch (...) {
    return record(AFCMEM_ERR_RUNTIME, "unknown failure");
  }
}

afcmem_status null_argument(const char *name) {
  return record(AFCMEM_ERR_ARGUMENT, std::string(name) + " is null");
}

} // namespace

extern "C" {

const char *afcmem_version(void) {
  static const std::string v = afcmem::runner::version_string();
  return v.c_str();
}

const char *afcmem_last_error(void) { return g_error.c_str(); }
const char *afcmem_last_error_field(void) { return g_field.c_str(); }

int afcmem_thread_budget(void) { return afcmem::thread_budget(); }

afcmem_status afcmem_config_load(const char *source, afcmem_config **out) {
  if (!out)
    return null_argument("out");
  *out = nullptr;
  if (!source)
    return record(AFCMEM_ERR_CONFIG, "--config: no config given", "--config");
  return guarded([&] {
    *out = new afcmem_config{afcmem::runner::load_config(source), {}};
  });
}

afcmem_status afcmem_config_parse(const char *yaml_text, afcmem_config **out) {
  if (!out)
    return null_argument("out");
  *out = nullptr;
  if (!yaml_text)
    return null_argument("yaml_text");
  return guarded([&] {
    *out = new afcmem_config{afcmem::runner::parse_config(yaml_text), {}};
  });
}

void afcmem_config_free(afcmem_config *config) { delete config; }

afcmem_status afcmem_config_set_seed(afcmem_config *config, uint64_t seed) {
  if (!config)
    return null_argument("config");
  config->cfg.seed = seed;
  return AFCMEM_OK;
}

afcmem_status afcmem_config_set_trials(afcmem_config *config,
                                       uint64_t trials_per_setting) {
  if (!config)
    return null_argument("config");
  return guarded([&] {
    auto next = config->cfg;
    next.tomography.trials_per_setting = trials_per_setting;
    next.validate();
    config->cfg = next;
  });
}

afcmem_status afcmem_config_seed(const afcmem_config *config, uint64_t *out) {
  if (!config || !out)
    return null_argument(config ? "out" : "config");
  *out = config->cfg.seed;
  return AFCMEM_OK;
}

afcmem_status afcmem_config_output_dir(const afcmem_config *config,
                                       const char **out) {
  if (!config || !out)
    return null_argument(config ? "out" : "config");
  *out = config->cfg.output_dir.c_str();
  return AFCMEM_OK;
}

afcmem_status afcmem_config_text(afcmem_config *config, const char **out) {
  if (!config || !out)
    return null_argument(config ? "out" : "config");
  return guarded([&] {
    config->scratch = afcmem::runner::serialize_config(config->cfg);
    *out = config->scratch.c_str();
  });
}

afcmem_status afcmem_config_hash(afcmem_config *config, const char **out) {
  if (!config || !out)
    return null_argument(config ? "out" : "config");
  return guarded([&] {
    config->scratch = afcmem::runner::config_hash(config->cfg);
    *out = config->scratch.c_str();
  });
}

afcmem_status afcmem_run(const afcmem_config *config,
                         afcmem_experiment experiment, int threads,
                         afcmem_report **out) {
  if (!config || !out)
    return null_argument(config ? "out" : "config");
  *out = nullptr;
  if (experiment < AFCMEM_ECHO || experiment > AFCMEM_CALIBRATE)
    return record(AFCMEM_ERR_ARGUMENT,
                  "unknown experiment " + std::to_string(experiment));
  if (threads <= 0)
    threads = afcmem::thread_budget();
  namespace r = afcmem::runner;
  const auto &cfg = config->cfg;
  return guarded([&] {
    r::RunReport rep;
    switch (experiment) {
    case AFCMEM_ECHO:
      rep = r::run_echo_trace(cfg);
      break;
    case AFCMEM_QPT:
      rep = r::run_qpt(cfg, threads);
      break;
    case AFCMEM_EFFICIENCY:
      rep = r::run_efficiency_curve(cfg, cfg.efficiency.storage_times_ns);
      break;
    case AFCMEM_ORACLE:
      rep = r::run_oracle(cfg, threads);
      break;
    case AFCMEM_NULL_PHASE:
      rep = r::run_null_phase(cfg);
      break;
    case AFCMEM_CALIBRATE:
      rep = r::run_calibration(cfg);
      break;
    }
    *out = new afcmem_report{std::move(rep), {}};
  });
}

void afcmem_report_free(afcmem_report *report) { delete report; }

afcmem_status afcmem_report_json(afcmem_report *report, const char **out) {
  if (!report || !out)
    return null_argument(report ? "out" : "report");
  return guarded([&] {
    report->scratch = report->report.json_text();
    *out = report->scratch.c_str();
  });
}

afcmem_status afcmem_report_csv(afcmem_report *report, const char *name,
                                const char **out) {
  if (!report || !out || !name)
    return null_argument(!report ? "report" : (!out ? "out" : "name"));
  const auto *table = report->report.table(name);
  if (table) {
    report->scratch = table->to_csv();
    *out = report->scratch.c_str();
    return AFCMEM_OK;
  }
  for (const auto &[file, text] : report->report.raw_csv) {
    if (file == name) {
      report->scratch = text;
      *out = report->scratch.c_str();
      return AFCMEM_OK;
    }
  }
  return record(AFCMEM_ERR_ARGUMENT, std::string("no table named ") + name);
}

afcmem_status afcmem_report_scalar(const afcmem_report *report,
                                   const char *key, double *out) {
  if (!report || !key || !out)
    return null_argument(!report ? "report" : (!key ? "key" : "out"));
  const nlohmann::ordered_json *node = &report->report.results;
  std::string path(key);
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const auto part = path.substr(start, dot - start);
    if (node->is_array()) {
      std::size_t index = 0;
      const auto [end, ec] =
          std::from_chars(part.data(), part.data() + part.size(), index);
      if (ec != std::errc{} || end != part.data() + part.size() ||
          index >= node->size())
        return record(AFCMEM_ERR_ARGUMENT, "no result named " + path);
      node = &(*node)[index];
    } else if (node->is_object() && node->contains(part)) {
      node = &(*node)[part];
    } else {
      return record(AFCMEM_ERR_ARGUMENT, "no result named " + path);
    }
    if (dot == std::string::npos)
      break;
    start = dot + 1;
  }
  if (node->is_boolean()) {
    *out = node->get<bool>() ? 1.0 : 0.0;
    return AFCMEM_OK;
  }
  if (!node->is_number())
    return record(AFCMEM_ERR_ARGUMENT, "result " + path + " is not a number");
  *out = node->get<double>();
  return AFCMEM_OK;
}

afcmem_status afcmem_report_write(const afcmem_report *report, const char *dir,
                                  const char *format) {
  if (!report || !dir || !format)
    return null_argument(!report ? "report" : (!dir ? "dir" : "format"));
  return guarded([&] { report->report.write(dir, format); });
}

} // extern "C"

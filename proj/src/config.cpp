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
#include "presets.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace afcmem::runner {
namespace {

// Read-tracking view of one YAML mapping; unknown keys are rejected.
class Section {
public:
  Section(YAML::Node node, std::string path)
      : node_(std::move(node)), path_(std::move(path)) {
    if (node_ && !node_.IsNull() && !node_.IsMap())
      fail(ErrorKind::config_invalid, "must be a mapping",
           path_.empty() ? "<root>" : path_);
  }

  std::string field(const std::string &key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  template <typename T> void read(const std::string &key, T &out) {
    used_.insert(key);
    if (!node_ || node_.IsNull() || !node_[key])
      return;
    try {
      out = node_[key].template as<T>();
    } catch (const YAML::Exception &) {
      fail(ErrorKind::config_invalid, "has the wrong type", field(key));
    }
  }

  void read_shape(const std::string &key, comb::ToothShape &out) {
    std::string name = comb::to_string(out);
    read(key, name);
    try {
      out = comb::tooth_shape_from_string(name);
    } catch (const Error &e) {
      fail(ErrorKind::config_invalid, e.detail(), field(key));
    }
  }

  Section child(const std::string &key) {
    used_.insert(key);
    YAML::Node sub;
    if (node_ && !node_.IsNull() && node_[key])
      sub = node_[key];
    return Section(sub, field(key));
  }

  void finish() const {
    if (!node_ || node_.IsNull())
      return;
    for (const auto &kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!used_.count(key))
        fail(ErrorKind::config_invalid, "unknown key", field(key));
    }
  }

private:
  YAML::Node node_;
  std::string path_;
  std::set<std::string> used_;
};

std::string real(double v) { return fmt::format("{}", v); }

void emit(YAML::Emitter &out, const char *key, double v) {
  out << YAML::Key << key << YAML::Value << real(v);
}
void emit(YAML::Emitter &out, const char *key, int v) {
  out << YAML::Key << key << YAML::Value << v;
}
void emit(YAML::Emitter &out, const char *key, std::uint64_t v) {
  out << YAML::Key << key << YAML::Value << v;
}
void emit(YAML::Emitter &out, const char *key, bool v) {
  out << YAML::Key << key << YAML::Value << v;
}
void emit(YAML::Emitter &out, const char *key, const std::string &v) {
  out << YAML::Key << key << YAML::Value << YAML::DoubleQuoted << v;
}

void require(bool ok, const std::string &field, const std::string &what) {
  if (!ok)
    fail(ErrorKind::config_invalid, what, field);
}

std::string normalized_preset_key(std::string name) {
  name.erase(std::remove(name.begin(), name.end(), '_'), name.end());
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return name;
}

} // namespace

double TimingSequence::cycle_duration_ms() const {
  return prep_repeats * sweep_us / 1000.0 + wait_ms +
         probe_pulses / probe_rate_mhz / 1000.0;
}

double TimingSequence::trials_per_second() const {
  return probe_pulses * cycle_rate_hz;
}

void TimingSequence::validate(const std::string &prefix) const {
  const auto f = [&](const char *n) { return prefix + "." + n; };
  require(prep_repeats >= 1, f("prep_repeats"), "must be >= 1");
  require(sweep_mhz > 0, f("sweep_mhz"), "must be > 0");
  require(sweep_us > 0, f("sweep_us"), "must be > 0");
  require(wait_ms >= 0, f("wait_ms"), "must be >= 0");
  require(probe_pulses >= 1, f("probe_pulses"), "must be >= 1");
  require(probe_rate_mhz > 0, f("probe_rate_mhz"), "must be > 0");
  require(cycle_rate_hz > 0, f("cycle_rate_hz"), "must be > 0");
  require(cycle_duration_ms() <= 1000.0 / cycle_rate_hz * (1.0 + 1e-12),
          f("cycle_rate_hz"),
          fmt::format("cycle of {} ms (prep + wait + probe) does not fit in "
                      "1/cycle_rate",
                      cycle_duration_ms()));
}

void ExperimentConfig::validate() const {
  require(schema_version == kSchemaVersion, "schema_version",
          fmt::format("unsupported schema version (expected {})",
                      kSchemaVersion));
  comb.validate("comb");
  grid.validate("grid");
  try {
    grid.check_samples(comb);
  } catch (const Error &e) {
    fail(ErrorKind::config_invalid, e.detail(), e.field());
  }
  require(pulse.fwhm_ns > 0, "pulse.fwhm_ns", "must be > 0");
  require(pulse.t0_ns < -3.0 * pulse.fwhm_ns, "pulse.t0_ns",
          "grid must start at least 3 pulse widths before the pulse peak");
  require(grid.window_ns() + pulse.t0_ns >=
              3.0 * comb.storage_time_ns() + pulse.fwhm_ns,
          "grid.n_points", "time window must cover 3 echo periods");
  require(echo.gate_ns > 0, "echo.gate_ns", "must be > 0");
  require(echo.gate_ns < comb.storage_time_ns(), "echo.gate_ns",
          "must be shorter than the storage time (gates overlap)");
  require(echo.n_echoes >= 1, "echo.n_echoes", "must be >= 1");
  require(echo.jitter_ns >= 0, "echo.jitter_ns", "must be >= 0");

  const auto crystal = [&](const CrystalConfig &c, const std::string &p) {
    require(c.length_mm > 0, p + ".length_mm", "must be > 0");
    require(c.depth_scale >= 0, p + ".depth_scale", "must be >= 0");
  };
  crystal(chain.crystal1, "chain.crystal1");
  crystal(chain.crystal2, "chain.crystal2");
  require(chain.residual_v_fraction >= 0 && chain.residual_v_fraction <= 1,
          "chain.residual_v_fraction", "must lie in [0, 1]");
  require(chain.wavelength_nm > 0, "chain.wavelength_nm", "must be > 0");
  require(std::isfinite(chain.birefringence), "chain.birefringence",
          "must be finite");

  tomo::NoiseModel model{noise.mean_photon_number, 0.0,
                         noise.detection_efficiency, noise.path_transmission,
                         noise.dark_prob_per_gate, echo.gate_ns};
  model.validate("noise");
  timing.validate("timing");

  require(tomography.trials_per_setting >= 1, "tomography.trials_per_setting",
          "must be >= 1");
  require(tomography.bootstrap_resamples >= 100,
          "tomography.bootstrap_resamples", "must be >= 100");
  require(tomography.mle_tol > 0, "tomography.mle_tol", "must be > 0");
  require(tomography.mle_max_iter >= 1, "tomography.mle_max_iter",
          "must be >= 1");
  for (double t : efficiency.storage_times_ns)
    require(t > 0, "efficiency.storage_times_ns", "times must be > 0");
  require(oracle.n_atoms >= 1, "oracle.n_atoms", "must be >= 1");
  require(oracle.dephase_sigma_rad >= 0, "oracle.dephase_sigma_rad",
          "must be >= 0");
}

ExperimentConfig parse_config(const std::string &text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception &e) {
    fail(ErrorKind::config_invalid,
         std::string("YAML syntax error: ") + e.what(), "<root>");
  }
  if (!root || root.IsNull())
    fail(ErrorKind::config_invalid, "config is empty", "schema_version");

  ExperimentConfig cfg;
  Section top(root, "");
  if (!root["schema_version"])
    fail(ErrorKind::config_invalid, "missing", "schema_version");
  top.read("schema_version", cfg.schema_version);
  top.read("name", cfg.name);
  top.read("seed", cfg.seed);
  top.read("output_dir", cfg.output_dir);

  auto comb = top.child("comb");
  comb.read("tooth_spacing_mhz", cfg.comb.tooth_spacing_mhz);
  comb.read("tooth_fwhm_mhz", cfg.comb.tooth_fwhm_mhz);
  comb.read("peak_optical_depth", cfg.comb.peak_optical_depth);
  comb.read("background_depth", cfg.comb.background_depth);
  comb.read("bandwidth_mhz", cfg.comb.bandwidth_mhz);
  comb.read_shape("tooth_shape", cfg.comb.tooth_shape);
  comb.finish();

  auto grid = top.child("grid");
  grid.read("n_points", cfg.grid.n_points);
  grid.read("span_mhz", cfg.grid.span_mhz);
  grid.finish();

  auto pulse = top.child("pulse");
  pulse.read("fwhm_ns", cfg.pulse.fwhm_ns);
  pulse.read("t0_ns", cfg.pulse.t0_ns);
  pulse.finish();

  auto echo = top.child("echo");
  echo.read("gate_ns", cfg.echo.gate_ns);
  echo.read("n_echoes", cfg.echo.n_echoes);
  echo.read("jitter_ns", cfg.echo.jitter_ns);
  echo.finish();

  auto chain = top.child("chain");
  for (auto [key, crystal] :
       {std::pair{"crystal1", &cfg.chain.crystal1},
        std::pair{"crystal2", &cfg.chain.crystal2}}) {
    auto c = chain.child(key);
    c.read("length_mm", crystal->length_mm);
    c.read("depth_scale", crystal->depth_scale);
    c.finish();
  }
  chain.read("residual_v_fraction", cfg.chain.residual_v_fraction);
  chain.read("birefringence", cfg.chain.birefringence);
  chain.read("wavelength_nm", cfg.chain.wavelength_nm);
  chain.read("hwp3_deg", cfg.chain.hwp3_deg);
  chain.read("phase_plate_deg", cfg.chain.phase_plate_deg);
  chain.read("hwp4_deg", cfg.chain.hwp4_deg);
  chain.read("auto_null", cfg.chain.auto_null);
  chain.finish();

  auto noise = top.child("noise");
  noise.read("mean_photon_number", cfg.noise.mean_photon_number);
  noise.read("detection_efficiency", cfg.noise.detection_efficiency);
  noise.read("path_transmission", cfg.noise.path_transmission);
  noise.read("dark_prob_per_gate", cfg.noise.dark_prob_per_gate);
  noise.finish();

  auto timing = top.child("timing");
  timing.read("prep_repeats", cfg.timing.prep_repeats);
  timing.read("sweep_mhz", cfg.timing.sweep_mhz);
  timing.read("sweep_us", cfg.timing.sweep_us);
  timing.read("wait_ms", cfg.timing.wait_ms);
  timing.read("probe_pulses", cfg.timing.probe_pulses);
  timing.read("probe_rate_mhz", cfg.timing.probe_rate_mhz);
  timing.read("cycle_rate_hz", cfg.timing.cycle_rate_hz);
  timing.finish();

  auto tomography = top.child("tomography");
  tomography.read("trials_per_setting", cfg.tomography.trials_per_setting);
  tomography.read("bootstrap_resamples", cfg.tomography.bootstrap_resamples);
  tomography.read("mle_tol", cfg.tomography.mle_tol);
  tomography.read("mle_max_iter", cfg.tomography.mle_max_iter);
  tomography.finish();

  auto efficiency = top.child("efficiency");
  efficiency.read("storage_times_ns", cfg.efficiency.storage_times_ns);
  efficiency.finish();

  auto oracle = top.child("oracle");
  oracle.read("n_atoms", cfg.oracle.n_atoms);
  oracle.read("dephase_sigma_rad", cfg.oracle.dephase_sigma_rad);
  oracle.finish();

  top.finish();
  cfg.validate();
  return cfg;
}

std::string serialize_config(const ExperimentConfig &cfg) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  emit(out, "schema_version", cfg.schema_version);
  emit(out, "name", cfg.name);
  emit(out, "seed", cfg.seed);
  emit(out, "output_dir", cfg.output_dir);

  out << YAML::Key << "comb" << YAML::Value << YAML::BeginMap;
  emit(out, "tooth_spacing_mhz", cfg.comb.tooth_spacing_mhz);
  emit(out, "tooth_fwhm_mhz", cfg.comb.tooth_fwhm_mhz);
  emit(out, "peak_optical_depth", cfg.comb.peak_optical_depth);
  emit(out, "background_depth", cfg.comb.background_depth);
  emit(out, "bandwidth_mhz", cfg.comb.bandwidth_mhz);
  emit(out, "tooth_shape", std::string(comb::to_string(cfg.comb.tooth_shape)));
  out << YAML::EndMap;

  out << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
  emit(out, "n_points", static_cast<std::uint64_t>(cfg.grid.n_points));
  emit(out, "span_mhz", cfg.grid.span_mhz);
  out << YAML::EndMap;

  out << YAML::Key << "pulse" << YAML::Value << YAML::BeginMap;
  emit(out, "fwhm_ns", cfg.pulse.fwhm_ns);
  emit(out, "t0_ns", cfg.pulse.t0_ns);
  out << YAML::EndMap;

  out << YAML::Key << "echo" << YAML::Value << YAML::BeginMap;
  emit(out, "gate_ns", cfg.echo.gate_ns);
  emit(out, "n_echoes", cfg.echo.n_echoes);
  emit(out, "jitter_ns", cfg.echo.jitter_ns);
  out << YAML::EndMap;

  out << YAML::Key << "chain" << YAML::Value << YAML::BeginMap;
  for (auto [key, crystal] :
       {std::pair{"crystal1", &cfg.chain.crystal1},
        std::pair{"crystal2", &cfg.chain.crystal2}}) {
    out << YAML::Key << key << YAML::Value << YAML::BeginMap;
    emit(out, "length_mm", crystal->length_mm);
    emit(out, "depth_scale", crystal->depth_scale);
    out << YAML::EndMap;
  }
  emit(out, "residual_v_fraction", cfg.chain.residual_v_fraction);
  emit(out, "birefringence", cfg.chain.birefringence);
  emit(out, "wavelength_nm", cfg.chain.wavelength_nm);
  emit(out, "hwp3_deg", cfg.chain.hwp3_deg);
  emit(out, "phase_plate_deg", cfg.chain.phase_plate_deg);
  emit(out, "hwp4_deg", cfg.chain.hwp4_deg);
  emit(out, "auto_null", cfg.chain.auto_null);
  out << YAML::EndMap;

  out << YAML::Key << "noise" << YAML::Value << YAML::BeginMap;
  emit(out, "mean_photon_number", cfg.noise.mean_photon_number);
  emit(out, "detection_efficiency", cfg.noise.detection_efficiency);
  emit(out, "path_transmission", cfg.noise.path_transmission);
  emit(out, "dark_prob_per_gate", cfg.noise.dark_prob_per_gate);
  out << YAML::EndMap;

  out << YAML::Key << "timing" << YAML::Value << YAML::BeginMap;
  emit(out, "prep_repeats", cfg.timing.prep_repeats);
  emit(out, "sweep_mhz", cfg.timing.sweep_mhz);
  emit(out, "sweep_us", cfg.timing.sweep_us);
  emit(out, "wait_ms", cfg.timing.wait_ms);
  emit(out, "probe_pulses", cfg.timing.probe_pulses);
  emit(out, "probe_rate_mhz", cfg.timing.probe_rate_mhz);
  emit(out, "cycle_rate_hz", cfg.timing.cycle_rate_hz);
  out << YAML::EndMap;

  out << YAML::Key << "tomography" << YAML::Value << YAML::BeginMap;
  emit(out, "trials_per_setting", cfg.tomography.trials_per_setting);
  emit(out, "bootstrap_resamples", cfg.tomography.bootstrap_resamples);
  emit(out, "mle_tol", cfg.tomography.mle_tol);
  emit(out, "mle_max_iter", cfg.tomography.mle_max_iter);
  out << YAML::EndMap;

  out << YAML::Key << "efficiency" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "storage_times_ns" << YAML::Value << YAML::Flow
      << YAML::BeginSeq;
  for (double t : cfg.efficiency.storage_times_ns)
    out << real(t);
  out << YAML::EndSeq;
  out << YAML::EndMap;

  out << YAML::Key << "oracle" << YAML::Value << YAML::BeginMap;
  emit(out, "n_atoms", cfg.oracle.n_atoms);
  emit(out, "dephase_sigma_rad", cfg.oracle.dephase_sigma_rad);
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto &p : detail::presets())
    names.emplace_back(p.name);
  return names;
}

std::optional<std::string> preset_text(const std::string &name) {
  const auto key = normalized_preset_key(name);
  for (const auto &p : detail::presets())
    if (normalized_preset_key(std::string(p.name)) == key)
      return std::string(p.text);
  return std::nullopt;
}

ExperimentConfig load_config(const std::string &path_or_preset) {
  if (path_or_preset.empty())
    fail(ErrorKind::config_invalid, "no config given", "--config");
  if (std::filesystem::is_regular_file(path_or_preset)) {
    std::ifstream in(path_or_preset);
    std::stringstream buf;
    buf << in.rdbuf();
    if (!in.good() && !in.eof())
      fail(ErrorKind::config_invalid, "cannot read file", "--config");
    return parse_config(buf.str());
  }
  if (auto text = preset_text(path_or_preset))
    return parse_config(*text);
  fail(ErrorKind::config_invalid,
       "'" + path_or_preset + "' is neither a readable file nor a preset",
       "--config");
}

std::string config_hash(const ExperimentConfig &cfg) {
  const auto text = serialize_config(cfg);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i)
    hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + stream * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

} // namespace afcmem::runner

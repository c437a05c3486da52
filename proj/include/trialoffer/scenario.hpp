// Copyright 2026 The Trialoffer Authors
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

// Experiment inputs: the MusicLab-like visibility profile, the four
// quality/appeal settings, and the JSON configuration file.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trialoffer/market.hpp"
#include "trialoffer/policies.hpp"
#include "trialoffer/rng.hpp"
#include "trialoffer/simulator.hpp"

namespace trialoffer {

/// Exponentially decaying visibility with a small linear rise over the last
/// positions (at most n - 2 of them). Over the decreasing part
///   v_p = v_min + (v_max - v_min) (e^{-(p-1)/tau} - e^{-(m-1)/tau}) / (1 - e^{-(m-1)/tau})
/// for p = 1..m, m = n - uptick_count, so v_1 = v_max and v_m = v_min. The
/// k-th of the uptick positions is v_min + uptick_gain * k / uptick_count.
struct VisibilitySpec {
  std::size_t n = 50;
  double v_max = 0.8;
  double v_min = 0.2;
  double decay_tau = 0.0;  // <= 0 means n / 5
  std::size_t uptick_count = 3;
  double uptick_gain = 0.05;

  void validate() const;
  bool operator==(const VisibilitySpec&) const = default;
};

VisibilityProfile musiclab_visibility(const VisibilitySpec& spec);

enum class SettingKind {
  GaussianIndependent,
  GaussianAnticorrelated,
  UniformIndependent,
  UniformAnticorrelated,
};

std::string_view to_string(SettingKind kind) noexcept;
/// Accepts the kebab-case names and the setting numbers "1".."4".
SettingKind parse_setting(std::string_view text);

/// Lower bound for generated qualities and appeals.
inline constexpr double kSettingFloor = 0.01;

struct GeneratedCatalog {
  ProductCatalog catalog;
  /// Anticorrelated settings: products whose appeal 1 - q_i was raised to
  /// the floor.
  std::size_t clamped = 0;
};

/// Gaussian settings draw N(0.5, 0.2) and min-max normalize the batch into
/// [0.01, 1]; uniform settings draw U[0.01, 1]. Qualities are drawn first
/// and independent appeals second, so an anticorrelated setting shares its
/// qualities with the independent one for the same stream.
GeneratedCatalog setting_catalog(SettingKind kind, std::size_t n, Rng& rng);

/// Convenience: setting_catalog with the stream derived from `seed`.
GeneratedCatalog setting_catalog(SettingKind kind, std::size_t n, std::uint64_t seed);

/// Contents of a configuration file. Products come either from a setting
/// generator (products.n + setting) or explicit q/A arrays; visibility from a
/// VisibilitySpec or an explicit vector.
struct ExperimentConfig {
  std::optional<std::size_t> product_count;
  std::vector<double> qualities;
  std::vector<double> appeals;
  SettingKind setting = SettingKind::GaussianIndependent;
  std::uint64_t setting_seed = 1;

  std::optional<VisibilitySpec> visibility_spec;
  std::vector<double> visibility;

  PolicyKind policy = PolicyKind::Quality;
  Condition condition = Condition::SocialInfluence;
  std::int64_t refresh_rate = 1;
  bool initial_shuffle = false;
  std::int64_t steps = 20000;
  std::int64_t worlds = 400;
  std::uint64_t master_seed = 1;
  TraceGranularity granularity = TraceGranularity::DownloadsOnly;
  std::int64_t curve_interval = 100;

  /// Resolves generated products and visibility into a simulation config.
  SimulationConfig resolve() const;

  bool operator==(const ExperimentConfig&) const = default;
};

/// A 50-song setting-1 experiment with the default visibility profile.
ExperimentConfig default_experiment_config();

/// Strict parse: unknown or missing fields and wrong types throw ParseError
/// naming the field.
ExperimentConfig parse_config(std::string_view json_text);
std::string dump_config(const ExperimentConfig& config);

ExperimentConfig load_config(const std::filesystem::path& path);
void save_config(const ExperimentConfig& config, const std::filesystem::path& path);

}  // namespace trialoffer
